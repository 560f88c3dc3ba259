"""weylkit command line.

Exit codes: 0 success, 1 a check or verdict came out negative, 64 usage
error, 65 bad input data, 70 internal failure.  ``descend`` uses 0 for
descends, 1 for fails and 2 when the criteria disagree.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor

from . import reports
from .exact.parse import ParseError, parse_point
from .exact.scalars import format_scalar

EX_OK, EX_FAIL, EX_DISAGREE = 0, 1, 2
EX_USAGE, EX_DATAERR, EX_SOFTWARE = 64, 65, 70


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _denoms(text: str) -> tuple:
    """"4" means 1..4; "1,2,4" lists denominators explicitly."""
    try:
        if "," in text:
            out = tuple(int(t) for t in text.split(",") if t.strip())
        else:
            out = tuple(range(1, int(text) + 1))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad denominators {text!r}") from exc
    if not out or min(out) < 1:
        raise argparse.ArgumentTypeError("denominators must be positive")
    return out


def _common(p):
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--truncation", type=int, default=None)
    p.add_argument("--denoms", type=_denoms, default=(1, 2, 3, 4))
    p.add_argument("--out", default=None)
    p.add_argument("--jobs", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="weylkit", description="Exact computations with Weyl groups, graphs and descent.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    s = sub.add_parser("rootsys", help="root system summary")
    s.add_argument("--type", required=True)
    s.add_argument("--lattice", default="root", choices=["root", "weight"])
    _common(s)

    s = sub.add_parser("fpoly", help="the polynomial F, the g_w and chain reports")
    s.add_argument("--type", required=True)
    s.add_argument("--word", default=None, help="reduced word of w0, e.g. 1,2,1")
    _common(s)

    s = sub.add_parser("schubert", help="basis of Sym/J_S for a closed subset")
    s.add_argument("--type", required=True)
    s.add_argument("--closed", default=None, help='elements, e.g. "e,s1,s2" or "e;s1 s2"')
    s.add_argument("--convention", default="graph", choices=["graph", "inverse"])
    _common(s)

    s = sub.add_parser("flatness", help="fiber lengths of a union of affine graphs")
    s.add_argument("--type", required=True)
    s.add_argument("--interval", default=None, help='top element, e.g. "s0 s1 s0"')
    s.add_argument("--subset", default=None, help='explicit elements separated by ";"')
    s.add_argument("--lattice", default="root", choices=["root", "weight"])
    s.add_argument("--generic", type=int, default=20)
    s.add_argument("--local", action="store_true", help="also compute local lengths")
    _common(s)

    s = sub.add_parser("fiber", help="coarse fiber over a point")
    s.add_argument("--type", required=True)
    s.add_argument("--lattice", default="root", choices=["root", "weight"])
    s.add_argument("--point", required=True)
    s.add_argument("--interval", default=None, help="also report the graph-union fiber")
    _common(s)

    s = sub.add_parser("stab", help="integral Weyl group and stabilizer of a point")
    s.add_argument("--type", required=True)
    s.add_argument("--lattice", default="root", choices=["root", "weight"])
    s.add_argument("--point", required=True)
    _common(s)

    s = sub.add_parser("descend", help="descent verdict for an equivariant module")
    s.add_argument("--type", default=None, help="Weyl type or Zm for a cyclic group")
    s.add_argument("--module", required=True, help="module JSON file")
    s.add_argument("--mode", default="all", choices=["all", "simple"])
    _common(s)

    s = sub.add_parser("selftest", help="run the checks for one type")
    s.add_argument("--type", required=True)
    s.add_argument("--count", type=int, default=10, help="random modules for the descent check")
    _common(s)
    return p


# --- helpers --------------------------------------------------------------------------

def _finite_label(label: str) -> str:
    return label[:-1] if label.endswith("~") else label


def _root_system(label: str, lattice: str = "root"):
    from .coxeter import SUPPORTED, build_root_system
    base = _finite_label(label)
    if base not in SUPPORTED:
        raise DataError(f"unsupported type {label!r}; supported: {', '.join(SUPPORTED)}")
    return build_root_system(base, lattice)


def _point(text: str, rank: int) -> list:
    try:
        pt = parse_point(text)
    except (ParseError, ValueError, ZeroDivisionError) as exc:
        raise DataError(f"bad point {text!r}: {exc}") from exc
    if len(pt) != rank:
        raise DataError(f"point needs {rank} coordinates")
    return pt


def _elements(group, text: str) -> list:
    parts = text.split(";") if ";" in text else text.split(",")
    out = []
    for t in parts:
        t = t.strip()
        if not t:
            continue
        try:
            out.append(group.parse_element(t))
        except ValueError as exc:
            raise DataError(str(exc)) from exc
    return out


# --- commands ---------------------------------------------------------------------------

def cmd_rootsys(a) -> reports.Report:
    from .coxeter import enumerate_closed_subsets, poincare_polynomial
    rs = _root_system(a.type, a.lattice)
    m = {"type": rs.label, "rank": rs.rank, "lattice": rs.lattice, "cartan_matrix": rs.cartan,
         "order": rs.order, "positive_roots": [[format_scalar(c) for c in r] for r in rs.positive_roots],
         "positive_coroots": [[format_scalar(c) for c in r] for r in rs.positive_coroots],
         "rho": [format_scalar(c) for c in rs.rho], "w0": rs.w0.name(), "length_w0": rs.w0.length,
         "poincare": [int(c) for c in poincare_polynomial(rs)],
         "lattice_index": rs.lattice_index()}
    if rs.order <= 24:
        m["closed_subsets"] = len(enumerate_closed_subsets(rs))
    m["ok"] = m["length_w0"] == len(rs.positive_roots)
    human = (f"{rs.label}: rank {rs.rank}, |W| = {rs.order}, {len(rs.positive_roots)} positive roots, "
             f"w0 = {rs.w0.name()}")
    return reports.Report("rootsys", m, human)


def cmd_fpoly(a) -> reports.Report:
    from .coxeter import parse_word
    from .demazure import bgg_chain_report, construct_F, verify_F
    rs = _root_system(a.type)
    pkg = construct_F(rs)
    if a.word:
        try:
            words = [parse_word(a.word)]
        except ValueError as exc:
            raise DataError(str(exc)) from exc
        if rs.element_from_word(words[0]) != rs.w0 or len(words[0]) != rs.w0.length:
            raise DataError(f"{a.word} is not a reduced word of w0")
    else:
        words = rs.reduced_words(rs.w0)
    chains = [bgg_chain_report(pkg, w) for w in words]
    ver = verify_F(pkg)
    ok = ver["ok"] and all(c["ok"] for c in chains)
    m = {"type": rs.label, "F": str(pkg.F), "Q": str(pkg.Q),
         "g": {w.name(): str(p) for w, p in pkg.g.items() if p},
         "gamma_product": str(pkg.gamma_product), "checks": ver, "chains": chains, "ok": ok}
    human = f"{rs.label}: F = {pkg.F}\n{len(chains)} chain report(s), {'all pass' if ok else 'FAILURES'}"
    return reports.Report("fpoly", m, human, EX_OK if ok else EX_FAIL)


def cmd_schubert(a) -> reports.Report:
    from .coxeter import first_closure_violation
    from .graphs import closed_subset_basis, verify_borel_product
    rs = _root_system(a.type)
    if a.closed is None:
        m = verify_borel_product(rs)
        human = f"{rs.label}: dim J_W = {m['dim_J_W']}, {len(m['closed'])} closed subsets checked"
        return reports.Report("schubert", m, human, EX_OK if m["ok"] else EX_FAIL)
    Z = _elements(rs, a.closed)
    if not Z:
        raise DataError("empty subset")
    v = first_closure_violation(rs, Z)
    if v is not None:
        raise DataError(f"subset is not closed: {v[0].name()} <= {v[1].name()} is missing")
    m = closed_subset_basis(rs, Z, convention=a.convention)
    human = f"{rs.label}: dim Sym/J_S = {m['dim_J_S']}, basis indices {', '.join(m['basis'])}"
    return reports.Report("schubert", m, human, EX_OK if m["ok"] else EX_FAIL)


def _affine(a):
    from .affine import affine_group
    _root_system(a.type)
    return affine_group(_finite_label(a.type) + "~", getattr(a, "lattice", "root"))


def cmd_flatness(a) -> reports.Report:
    from .graphs import NotClosedError, flatness_report
    G = _affine(a)
    if a.interval is not None:
        top = _elements(G, a.interval.replace(",", " ").replace(";", " ") or "e")
        S = G.lower_interval(top[0] if top else G.identity)
    elif a.subset is not None:
        S = _elements(G, a.subset)
    else:
        raise UsageError("give --interval or --subset")
    try:
        m = flatness_report(G, S, a.denoms, a.generic, a.seed, local=a.local)
    except NotClosedError as exc:
        raise DataError(str(exc)) from exc
    human = f"{G.label}: |S| = {m['size']}, {m['points']} points, verdict {m['verdict']}"
    return reports.Report("flatness", m, human, EX_OK if m["verdict"] == "PASS" else EX_FAIL)


def cmd_fiber(a) -> reports.Report:
    from .graphs import coarse_fiber, fiber_dimension
    rs = _root_system(a.type, a.lattice)
    x = _point(a.point, rs.rank)
    cf = coarse_fiber(rs, x, a.lattice)
    m = cf.to_dict()
    coset = "coset" if cf.cosets == 1 else "cosets"
    human = f"{cf.cosets} {coset}, coinvariant dim {cf.coinvariant_dim}"
    if a.interval is not None:
        G = _affine(a)
        S = G.lower_interval(_elements(G, a.interval.replace(",", " "))[0])
        m["graph_fiber"] = fiber_dimension(S, x, G).to_dict()
        human += f"; graph fiber length {m['graph_fiber']['total']}"
    return reports.Report("fiber", m, human, EX_OK if cf.ok() else EX_FAIL)


def cmd_stab(a) -> reports.Report:
    from .affine import stabilizer
    rs = _root_system(a.type, a.lattice)
    x = _point(a.point, rs.rank)
    d = stabilizer(rs, x, a.lattice)
    m = {"point": [format_scalar(c) for c in d.point], "lattice": d.lattice,
         "W_bracket": [w.name() for w in d.W_bracket],
         "lifts": {w.name(): [format_scalar(c) for c in d.lifts[w]] for w in d.W_bracket},
         "integral_roots": [[format_scalar(c) for c in r] for r in d.Phi_bracket],
         "W_x": [w.name() for w in d.W_x], "W_dot": [w.name() for w in d.W_dot],
         "extended_stabilizer": [w.name() for w in d.extended],
         "extended_lifts": {w.name(): [format_scalar(c) for c in d.extended_lifts[w]] for w in d.extended},
         "agree": d.agree, "ok": d.agree}
    human = (f"W_[x] has order {len(d.W_bracket)}; stabilizer in the {a.lattice}-lattice extended group "
             f"has order {len(d.extended)}")
    return reports.Report("stab", m, human, EX_OK if d.agree else EX_SOFTWARE)


def _default_group(label):
    if label is None:
        return None
    from .descent.action import GroupAction, cyclic_action, weyl_group_action
    if label.upper().startswith("Z"):
        try:
            m = int(label[1:])
        except ValueError as exc:
            raise DataError(f"bad cyclic group {label!r}") from exc
        return lambda ring: cyclic_action(m, 1, ring)
    rs = _root_system(label)
    return lambda ring: weyl_group_action(rs, ring)


def cmd_descend(a) -> reports.Report:
    from .descent.criteria import descend
    try:
        with open(a.module) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise DataError(f"cannot read module file: {exc}") from exc
    try:
        EM = reports.load_module(data, _default_group(a.type))
    except reports.ModuleFormatError as exc:
        raise DataError(str(exc)) from exc
    mode = "coxeter-simple" if a.mode == "simple" else "all"
    try:
        v = descend(EM, mode=mode, strict=False)
    except ValueError as exc:
        raise DataError(str(exc)) from exc
    m = v.to_dict()
    code = {"descends": EX_OK, "fails": EX_FAIL}.get(v.verdict, EX_DISAGREE)
    human = f"verdict: {v.verdict} ({', '.join(f'{k}={x}' for k, x in v.agreement.items())})"
    return reports.Report("descend", m, human, code)


def _descent_task(args):
    name, seed, i = args
    from .descent.corpus import random_module
    from .descent.criteria import descend
    M = random_module(name, seed, i)
    v = descend(M, strict=False)
    simple = descend(M, mode="coxeter-simple", strict=False).verdict if M.group.simple_indices else v.verdict
    return {"index": i, "verdict": v.verdict, "simple": simple, "recipe": M.recipe}


def cmd_selftest(a) -> reports.Report:
    from .coxeter import enumerate_closed_subsets, is_closed
    from .demazure import bgg_chain_report, construct_F
    from .graphs import flatness_report, verify_borel_product
    from .affine import affine_group, random_points, special_points, stabilizer
    from .graphs import coarse_fiber
    rs = _root_system(a.type)
    checks = {}
    closed = enumerate_closed_subsets(rs) if rs.order <= 24 else []
    checks["closed_subsets"] = {"count": len(closed), "ok": all(is_closed(rs, Z) for Z in closed)}
    if rs.rank <= 2:
        pkg = construct_F(rs)
        chains = [bgg_chain_report(pkg, w)["ok"] for w in rs.reduced_words(rs.w0)]
        checks["fpoly"] = {"words": len(chains), "ok": all(chains)}
        b = verify_borel_product(rs)
        checks["borel"] = {"dim_J_W": b["dim_J_W"], "ok": b["ok"]}
        G = affine_group(rs.label + "~")
        k = 3 if rs.rank == 1 else 2
        reps = [flatness_report(G, G.lower_interval(g), a.denoms[:2], 5, a.seed)["verdict"]
                for g in G.elements_up_to_length(k)]
        checks["flatness"] = {"intervals": len(reps), "ok": all(r == "PASS" for r in reps)}
    pts = special_points(rs, (1, 2), 1) + random_points(rs, 20, a.seed)
    agree = all(stabilizer(rs, p).agree for p in pts)
    fibers = all(coarse_fiber(rs, p).ok() for p in pts)
    checks["stabilizers"] = {"points": len(pts), "ok": agree and fibers}
    if rs.label in ("A1", "A2", "B2", "G2"):
        tasks = [(rs.label, a.seed, i) for i in range(a.count)]
        if a.jobs > 1:
            with ProcessPoolExecutor(a.jobs) as ex:
                rows = list(ex.map(_descent_task, tasks))
        else:
            rows = [_descent_task(tk) for tk in tasks]
        bad = [r for r in rows if r["verdict"] == "disagree" or r["simple"] != r["verdict"]]
        checks["descent"] = {"modules": len(rows), "disagreements": bad, "ok": not bad}
    ok = all(c["ok"] for c in checks.values())
    m = {"type": rs.label, "checks": checks, "ok": ok}
    human = "\n".join(f"{k}: {'pass' if c['ok'] else 'FAIL'}" for k, c in checks.items())
    return reports.Report("selftest", m, human, EX_OK if ok else EX_SOFTWARE)


COMMANDS = {"rootsys": cmd_rootsys, "fpoly": cmd_fpoly, "schubert": cmd_schubert,
            "flatness": cmd_flatness, "fiber": cmd_fiber, "stab": cmd_stab,
            "descend": cmd_descend, "selftest": cmd_selftest}


def run(argv=None, stdout=None, stderr=None) -> tuple:
    """Run one command; returns (exit code, Report or None)."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
        if a.command is None:
            raise UsageError("a subcommand is required")
    except UsageError as exc:
        print(f"usage error: {exc}", file=stderr)
        return EX_USAGE, None
    try:
        rep = COMMANDS[a.command](a)
    except UsageError as exc:
        print(f"usage error: {exc}", file=stderr)
        return EX_USAGE, None
    except (DataError, ParseError) as exc:
        print(f"input error: {exc}", file=stderr)
        return EX_DATAERR, None
    except Exception as exc:  # anything else is a bug
        print(f"internal error: {type(exc).__name__}: {exc}", file=stderr)
        return EX_SOFTWARE, None
    text = reports.render(rep)
    if a.out:
        with open(a.out, "w") as fh:
            fh.write(text)
        print(rep.human, file=stdout)
    else:
        stdout.write(text)
    return rep.exit_code, rep


def main(argv=None) -> int:
    code, _ = run(argv)
    return code


if __name__ == "__main__":
    sys.exit(main())
