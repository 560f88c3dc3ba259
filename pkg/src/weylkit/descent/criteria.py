"""Three descent criteria for equivariant graded modules, and orbit descent for the affine group.

counit:     Sym tensor_{Sym^H} M^H -> M is an isomorphism.
reflection: for each pseudo-reflection r, <r> acts trivially on the restriction
            of M to the fixed hyperplane (Tor_0 and the twisted Tor_1).
pointwise:  at a witness of every stratum, the stabilizer acts trivially on
            the derived fiber.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from ..exact.linalg import rank, row_space_basis, transpose
from ..exact.modules import syzygy_vectors, vec_degree
from ..exact.polynomial import monomials_of_degree
from ..exact.scalars import ONE, ZERO, format_scalar
from .action import EquivariantModule, GroupAction, strata
from .fibers import derived_fiber, is_identity, module_resolution

# Power of the eigenvalue chi of r on l_r used to twist ann_M(l_r) before the
# triviality check.  It comes from the Koszul generator (l_r) carrying chi;
# the value is pinned by agreement with the counit criterion on A1.
TOR1_TWIST_EXPONENT = 1


class CriteriaDisagreement(AssertionError):
    def __init__(self, record: dict):
        super().__init__(f"descent criteria disagree: {record}")
        self.record = record


@dataclass
class DescentVerdict:
    verdict: str                       # descends | fails
    criterion: str
    witnesses: list = field(default_factory=list)
    details: dict = field(default_factory=dict)
    agreement: dict = field(default_factory=dict)

    @property
    def descends(self) -> bool:
        return self.verdict == "descends"

    def to_dict(self) -> dict:
        return {"verdict": self.verdict, "criterion": self.criterion, "witnesses": self.witnesses,
                "details": self.details, "agreement": self.agreement}


# --- univariate helpers (coefficient lists, low degree first) ---------------------

def _pmul(a, b):
    out = [ZERO] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            if y != 0:
                out[i + j] = out[i + j] + x * y
    return out


def _padd(a, b):
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else ZERO) + (b[i] if i < len(b) else ZERO) for i in range(n)]


def _ptrim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def coinvariant_poincare(degrees: Sequence[int]) -> list:
    out = [ONE]
    for d in degrees:
        out = _pmul(out, [ONE] * d)
    return out


# --- counit criterion ----------------------------------------------------------------

class _Graded:
    """Degree-d pieces of M with group matrices and invariants."""

    def __init__(self, EM: EquivariantModule):
        self.EM = EM
        self.sub = EM.submodule()
        self.cache = {}

    def piece(self, d: int):
        if d in self.cache:
            return self.cache[d]
        EM = self.EM
        ring = EM.ring
        basis = self.sub.quotient_basis(d)
        index = {b: t for t, b in enumerate(basis)}
        n = len(basis)
        mats = {}
        for g in range(EM.group.order):
            cols = []
            for c, e in basis:
                v = [ring.zero() for _ in range(EM.rank)]
                v[c] = ring.monomial(e)
                cols.append(self.coords(EM.act_vec(g, v), index, n))
            mats[g] = transpose(cols) if cols else []
        avg = [[ZERO] * n for _ in range(n)]
        for M in mats.values():
            for a in range(n):
                for b in range(n):
                    avg[a][b] += M[a][b]
        order = EM.group.order
        avg = [[c / order for c in row] for row in avg]
        inv = row_space_basis(transpose(avg)) if n else []
        inv_vecs = [self.vector(v, basis) for v in inv]
        self.cache[d] = (basis, index, mats, inv_vecs)
        return self.cache[d]

    def coords(self, vec, index, n):
        nf = self.sub.reduce(vec)
        out = [ZERO] * n
        for c, p in enumerate(nf):
            for e, v in p.terms.items():
                out[index[(c, e)]] += v
        return out

    def vector(self, coords, basis):
        ring = self.EM.ring
        v = [ring.zero() for _ in range(self.EM.rank)]
        for a, (c, e) in zip(coords, basis):
            if a != 0:
                v[c] = v[c] + ring.monomial(e).scale(a)
        return v

    def trace(self, g: int, d: int):
        M = self.piece(d)[2][g]
        return sum((M[i][i] for i in range(len(M))), ZERO)


def counit_degree_bound(EM: EquivariantModule) -> int:
    degs = EM.gen_degrees
    rels = EM.presentation.relation_degrees() or [max(degs)]
    return max(degs) + max(rels) + sum(f.degree() for f in EM.group.invariants())


def descend_counit(EM: EquivariantModule, bound: int | None = None) -> DescentVerdict:
    G = EM.group
    ring = EM.ring
    n = ring.nvars
    inv_degs = [f.degree() for f in G.invariants()]
    P = coinvariant_poincare(inv_degs)
    D = counit_degree_bound(EM) if bound is None else bound
    gr = _Graded(EM)
    lo = min(EM.gen_degrees)
    inv_dims = {}
    rows = []
    first_bad = None
    for d in range(lo, D + 1):
        basis, index, _, _ = gr.piece(d)
        inv_dims[d] = len(gr.piece(d)[3])
        # image of Sym tensor M^H in degree d
        span = []
        for k in range(lo, d + 1):
            for v in gr.piece(k)[3]:
                for e in monomials_of_degree(n, d - k):
                    m = ring.monomial(e)
                    span.append(gr.coords([p * m for p in v], index, len(basis)))
        img = rank(span) if span and basis else 0
        src = sum((P[a] * inv_dims.get(d - a, 0) for a in range(len(P)) if d - a >= lo), ZERO)
        row = {"degree": d, "dim_M": len(basis), "dim_invariants": inv_dims[d],
               "image": img, "source": int(src)}
        rows.append(row)
        if first_bad is None and (img < len(basis) or src != len(basis)):
            kind = "cokernel" if img < len(basis) else "kernel"
            first_bad = {"degree": d, "kind": kind, "dim_M": len(basis), "image": img,
                         "source": int(src)}
    molien = _molien_certificate(EM, gr, P, inv_dims, D)
    ok = first_bad is None and molien["ok"]
    wit = [first_bad] if first_bad else ([] if ok else [{"kind": "series", **molien}])
    return DescentVerdict("descends" if ok else "fails", "counit", wit,
                          {"bound": D, "degrees": rows, "series": molien})


def _molien_certificate(EM, gr, P, inv_dims, D) -> dict:
    """Exact check of HS(M) = P_H(t) HS(M^H), with HS(M^H) from graded traces (Molien)."""
    G = EM.group
    res = module_resolution(EM)
    beta = max(max(ds) for ds in res.degrees if ds)
    lo = min(EM.gen_degrees)
    hs = EM.presentation.hilbert_series()
    K = [ZERO + c for c in hs.numerator]
    nv = EM.ring.nvars
    # N_h(t) = (sum_d tr(h | M_d) t^d) det(I - t A_h), truncated at beta
    dets = [G.det_series(g) for g in range(G.order)]
    nums = []
    for g in range(G.order):
        tr = [ZERO] * (beta + 1)
        for d in range(lo, beta + 1):
            tr[d] = gr.trace(g, d)
        nums.append(_pmul(tr, dets[g])[:beta + 1])
    # |H| K(t) prod det = P(t) (1-t)^denom sum_h N_h prod_{h' != h} det
    L = [ONE]
    for dt in dets:
        L = _pmul(L, dt)
    lhs = _pmul([ZERO + G.order], _pmul(K, L))
    rhs_sum = []
    for g in range(G.order):
        rest = [ONE]
        for h in range(G.order):
            if h != g:
                rest = _pmul(rest, dets[h])
        rhs_sum = _padd(rhs_sum, _pmul(nums[g], rest))
    one_minus_t = [ONE]
    for _ in range(hs.denom):
        one_minus_t = _pmul(one_minus_t, [ONE, -ONE])
    rhs = _pmul(_pmul(P, one_minus_t), rhs_sum)
    ok = _ptrim(lhs) == _ptrim(rhs)
    # independent route: Molien coefficients against the averaged dimensions
    series_ok = True
    for d in range(lo, D + 1):
        val = ZERO
        for g in range(G.order):
            val += _series_coeff(nums[g], dets[g], d)
        if val / G.order != inv_dims.get(d, 0):
            series_ok = False
    return {"ok": ok and series_ok, "identity": ok, "invariant_dims_match": series_ok,
            "hilbert_series": str(hs), "beta": beta}


def _series_coeff(num, den, d):
    """Coefficient of t^d in num/den (den[0] = 1)."""
    out = []
    for k in range(d + 1):
        c = num[k] if k < len(num) else ZERO
        for j in range(1, min(k, len(den) - 1) + 1):
            c -= den[j] * out[k - j]
        out.append(c)
    return out[d]


# --- reflection criterion ------------------------------------------------------------

def _scaled_form(EM, coeffs):
    ring = EM.ring
    out = ring.zero()
    for i, c in enumerate(coeffs):
        if c != 0:
            out = out + ring.gen(i).scale(c)
    return out


def descend_reflection(EM: EquivariantModule, r: int, twist: int | None = None) -> DescentVerdict:
    """Triviality of <r> on M / l M and on ann_M(l) twisted by chi^twist."""
    if twist is None:
        twist = TOR1_TWIST_EXPONENT
    G = EM.group
    ring = EM.ring
    coeffs, chi = G.reflection_form(r)
    l = _scaled_form(EM, coeffs)
    # r acts trivially on Sym / (l)
    for i in range(ring.nvars):
        x = ring.gen(i)
        if not (G.act_poly(r, x) - x).divmod(l)[1].is_zero():
            raise AssertionError("reflection does not act trivially on the hyperplane")
    sub = EM.submodule()
    rk = EM.rank
    from ..exact.modules import Submodule
    lcols = []
    for j in range(rk):
        v = [ring.zero() for _ in range(rk)]
        v[j] = l
        lcols.append(v)
    sub0 = Submodule(ring, rk, list(EM.relations) + lcols, EM.gen_degrees)
    bad0 = []
    for j in range(rk):
        e = [ring.zero() for _ in range(rk)]
        e[j] = ring.one()
        diff = [a - b for a, b in zip(EM.act_vec(r, e), e)]
        if not sub0.contains(diff):
            bad0.append(j)
    # ann_M(l): first rk components of syzygies of [l e_j | relations]
    cols = lcols + list(EM.relations)
    syz = syzygy_vectors(ring, rk, cols, EM.gen_degrees)
    ann = []
    for s in syz:
        m = s[:rk]
        if any(m) and not sub.contains(m):
            ann.append(m)
    c = chi ** twist if twist else ONE
    bad1 = []
    for t, m in enumerate(ann):
        moved = [p.scale(c) for p in EM.act_vec(r, m)]
        if not sub.contains([a - b for a, b in zip(moved, m)]):
            bad1.append(t)
    ok = not bad0 and not bad1
    wit = []
    if bad0:
        wit.append({"reflection": r, "tor": 0, "generators": bad0})
    if bad1:
        wit.append({"reflection": r, "tor": 1, "annihilator_generators": len(bad1)})
    return DescentVerdict("descends" if ok else "fails", "reflection", wit,
                          {"reflection": r, "form": str(l), "eigenvalue": format_scalar(chi),
                           "tor1_generators": len(ann)})


def descend_reflections(EM: EquivariantModule, which: Sequence[int] | None = None,
                        twist: int | None = None) -> DescentVerdict:
    G = EM.group
    refl = list(which) if which is not None else G.reflections()
    wit, details = [], []
    for r in refl:
        v = descend_reflection(EM, r, twist)
        details.append({"reflection": r, "verdict": v.verdict})
        wit += v.witnesses
    ok = not wit
    return DescentVerdict("descends" if ok else "fails", "reflection", wit[:1] if wit else [],
                          {"checked": details})


# --- pointwise criterion -------------------------------------------------------------

_STRATA_CACHE: dict = {}


def group_strata(G: GroupAction) -> list:
    key = id(G)
    if key not in _STRATA_CACHE:
        _STRATA_CACHE[key] = (G, strata(G))
    return _STRATA_CACHE[key][1]


def descend_pointwise(EM: EquivariantModule, truncation: int | None = None) -> DescentVerdict:
    G = EM.group
    rows = []
    wit = []
    res = module_resolution(EM, truncation)
    for s in group_strata(G):
        if s.stabilizer != s.brute_stabilizer:
            raise AssertionError("stratum stabilizer differs from the brute-force stabilizer")
        fib = derived_fiber(EM, s.witness, res=res)
        if not fib.homomorphism_ok:
            raise AssertionError("induced maps on Tor violate the group relations")
        rows.append({"stratum_dim": s.dim, **fib.to_dict()})
        if not fib.is_trivial() and not wit:
            wit.append({"point": [format_scalar(c) for c in s.witness],
                        "degrees": fib.nontrivial_degrees()})
    ok = not wit
    return DescentVerdict("descends" if ok else "fails", "pointwise", wit,
                          {"strata": rows, "resolution_complete": res.complete})


def nonzero_fiber_witness(EM: EquivariantModule):
    """A stratum witness with nonzero derived fiber, or None."""
    res = module_resolution(EM)
    for s in group_strata(EM.group):
        if not derived_fiber(EM, s.witness, res=res, check_homomorphism=False).is_zero():
            return s.witness
    return None


# --- all criteria --------------------------------------------------------------------

def descend(EM: EquivariantModule, mode: str = "all", strict: bool = True) -> DescentVerdict:
    """Run every criterion, require unanimity, return the agreed verdict."""
    G = EM.group
    if mode == "all":
        which = G.reflections()
    elif mode in ("coxeter-simple", "simple"):
        which = G.simple_indices
        if which is None:
            raise ValueError("coxeter-simple mode needs a Coxeter presentation")
    else:
        raise ValueError(f"unknown mode {mode!r}")
    runs = {"counit": descend_counit(EM), "reflection": descend_reflections(EM, which),
            "pointwise": descend_pointwise(EM)}
    agreement = {k: v.verdict for k, v in runs.items()}
    verdicts = set(agreement.values())
    if len(verdicts) != 1:
        record = {k: v.to_dict() for k, v in runs.items()}
        record["recipe"] = EM.recipe
        if strict:
            raise CriteriaDisagreement(record)
        return DescentVerdict("disagree", "all", [record], {}, agreement)
    verdict = verdicts.pop()
    wit = []
    for k, v in runs.items():
        for w in v.witnesses:
            wit.append({"criterion": k, **w})
    return DescentVerdict(verdict, "all", wit, {k: v.details for k, v in runs.items()}, agreement)


# --- affine orbit descent ----------------------------------------------------------------

def affine_orbit_descent(rs, x: Sequence, rep, lattice: str = "root") -> DescentVerdict:
    """Orbit module at x with stabilizer representation ``rep``.

    ``rep`` maps finite Weyl elements (or their names) of a generating set of
    the stabilizer to square matrices, or is one of "trivial", "sign".  The
    stabilizer is the integral Weyl group for the root lattice, or the
    extended one for ``lattice="weight"``.
    """
    from ..affine import stabilizer as affine_stabilizer
    from ..exact.invariants import freeze
    from ..exact.linalg import identity, matmul
    data = affine_stabilizer(rs, x, lattice)
    H = data.W_bracket if lattice == "root" else data.extended
    Hset = set(H)
    if rep == "trivial":
        gens = {w: [[ONE]] for w in H}
    elif rep == "sign":
        gens = {w: [[ONE if w.length % 2 == 0 else -ONE]] for w in H}
    else:
        gens = {}
        for k, M in dict(rep).items():
            w = rs.parse_element(k) if isinstance(k, str) else k
            if w not in Hset:
                raise ValueError(f"{w.name()} is not in the stabilizer")
            gens[w] = [list(r) for r in M]
    dim = len(next(iter(gens.values()))) if gens else 1
    # close the assignment and check the group relations
    table = {rs.identity: identity(dim)}
    frontier = [rs.identity]
    while frontier:
        nxt = []
        for u in frontier:
            for w, M in gens.items():
                v = u * w
                P = matmul(table[u], M)
                if v not in table:
                    table[v] = P
                    nxt.append(v)
                elif freeze(table[v]) != freeze(P):
                    raise ValueError("representation matrices violate the group relations")
        frontier = nxt
    bad = []
    for w, M in table.items():
        tr = sum((M[i][i] for i in range(dim)), ZERO)
        if tr != dim:
            bad.append({"element": w.name(), "trace": format_scalar(tr)})
    ok = not bad
    lifts = data.lifts if lattice == "root" else data.extended_lifts
    return DescentVerdict("descends" if ok else "fails", "orbit", bad,
                          {"point": [format_scalar(c) for c in data.point], "lattice": lattice,
                           "stabilizer": [w.name() for w in H],
                           "lifts": {w.name(): [format_scalar(c) for c in lifts[w]] for w in H}})
