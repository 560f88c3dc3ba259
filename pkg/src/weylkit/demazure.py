"""Demazure operators, the BGG family R_w and the F-polynomial package.

Polynomials on t x t* live in a ring with an x-block and a y-block; both
blocks use simple coroots as variables.  A Weyl element acts on a block by
its coroot-basis matrix, and D_s(f) = (f - s f) / x_s divides by the coroot
variable of s in the chosen block.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from math import factorial
from typing import Sequence

from .coxeter import RootSystem, WeylElement, bruhat_leq, build_root_system, word_to_str
from .exact.groebner import Ideal
from .exact.invariants import act, fundamental_invariants
from .exact.linalg import rank, solve_many
from .exact.polynomial import Poly, PolyRing, monomials_of_degree
from .exact.scalars import ONE, ZERO, qq


class ConventionError(ArithmeticError):
    """A division or linear solve that must succeed did not: a convention bug."""


def xy_ring(rs: RootSystem) -> PolyRing:
    return PolyRing.block_ring(rs.rank, ("x", "y"))


def y_ring(rs: RootSystem) -> PolyRing:
    return PolyRing.block_ring(rs.rank, ("y",))


def _block(ring: PolyRing, block: str | None):
    if block is None:
        return tuple(range(ring.nvars)) if len(ring.blocks) == 1 else ring.blocks["y"]
    return ring.blocks[block]


def weyl_act(rs: RootSystem, w: WeylElement, f: Poly, block: str | None = None) -> Poly:
    """(w.f)(lambda) = f(w^{-1} lambda) on the variables of ``block``."""
    idx = _block(f.ring, block)
    return act(w.coroot_action(), f, idx)


def demazure_simple(rs: RootSystem, f: Poly, i: int, block: str | None = None) -> Poly:
    """D_{s_i} f = (f - s_i f) / x_i in the chosen block."""
    idx = _block(f.ring, block)
    v = idx[i - 1]
    sf = weyl_act(rs, rs.simple_reflection(i), f, block)
    diff = f - sf
    out = {}
    for e, c in diff.terms.items():
        if e[v] == 0:
            raise ConventionError(f"D_s{i}: difference not divisible by the coroot variable")
        ne = list(e)
        ne[v] -= 1
        out[tuple(ne)] = c
    return Poly(f.ring, out)


def demazure(rs: RootSystem, f: Poly, word: Sequence[int], block: str | None = None) -> Poly:
    """D_{s_1} ... D_{s_r} f (the rightmost operator is applied first)."""
    for i in reversed(list(word)):
        if not f:
            break
        f = demazure_simple(rs, f, i, block)
    return f


def demazure_element(rs: RootSystem, f: Poly, w: WeylElement, block: str | None = None) -> Poly:
    return demazure(rs, f, w.word, block)


def rho_check_form(rs: RootSystem, ring: PolyRing, block: str | None = None) -> Poly:
    idx = _block(ring, block)
    terms = {}
    for c, i in zip(rs.rho_check, idx):
        if c != 0:
            e = [0] * ring.nvars
            e[i] = 1
            terms[tuple(e)] = c
    return Poly(ring, terms)


# --- BGG family ------------------------------------------------------------

@dataclass
class SchubertFamily:
    rs: RootSystem
    ring: PolyRing
    R: dict                       # WeylElement -> Poly in the y variables

    def degrees(self) -> dict:
        return {w: p.degree() for w, p in self.R.items()}


_FAMILY_CACHE: dict = {}


def schubert_family(rs: RootSystem, ring: PolyRing | None = None, check: bool = True) -> SchubertFamily:
    """R_{w0} = rho_check(y)^l / l!, R_w = D_{w0 w^{-1}} R_{w0}."""
    if ring is None:
        ring = y_ring(rs)
    key = (rs.label, ring.names)
    if key in _FAMILY_CACHE:
        return _FAMILY_CACHE[key]
    ell = rs.w0.length
    top = rho_check_form(rs, ring, "y") ** ell
    top = top.scale(ONE / factorial(ell))
    R = {}
    for w in rs.elements:
        u = rs.w0 * w.inverse()
        R[w] = demazure(rs, top, u.word, "y")
        if check and R[w].degree() != w.length:
            raise ConventionError(f"deg R_{w.name()} = {R[w].degree()} != l(w) = {w.length}")
    fam = SchubertFamily(rs, ring, R)
    if check:
        _check_independent(rs, fam)
    _FAMILY_CACHE[key] = fam
    return fam


def _check_independent(rs: RootSystem, fam: SchubertFamily):
    """Images of the R_w in the coinvariant algebra are linearly independent."""
    ring = fam.ring
    idx = ring.blocks["y"]
    group = [w.coroot_action() for w in rs.elements]
    inv = fundamental_invariants(group, ring, idx)
    J = Ideal(ring, inv)
    nfs = [J.normal_form(fam.R[w]) for w in rs.elements]
    monos = sorted({m for p in nfs for m in p.terms})
    mat = [[p.terms.get(m, ZERO) for m in monos] for p in nfs]
    if rank(mat) != len(nfs):
        raise ConventionError("Schubert family is linearly dependent modulo coinvariants")


# --- expansion in the R_w basis -----------------------------------------------

class SchubertExpander:
    """Writes polynomials in k[x, y] as sum g_w R_w(y) with g_w y-invariant."""

    def __init__(self, rs: RootSystem, ring: PolyRing):
        self.rs = rs
        self.ring = ring
        self.yidx = ring.blocks["y"]
        self.family = schubert_family(rs, ring)
        group = [w.coroot_action() for w in rs.elements]
        self.invariants = fundamental_invariants(group, ring, self.yidx)
        self.inv_degrees = [f.degree() for f in self.invariants]
        self._systems: dict = {}
        self._inv_mono_cache: dict = {}

    def invariant_monomials(self, d: int) -> list:
        """Products of fundamental invariants of total degree d: (exponents, poly)."""
        if d in self._inv_mono_cache:
            return self._inv_mono_cache[d]
        out = []
        degs = self.inv_degrees

        def rec(k, remaining, exps):
            if k == len(degs):
                if remaining == 0:
                    out.append(tuple(exps))
                return
            for a in range(remaining // degs[k] + 1):
                rec(k + 1, remaining - a * degs[k], exps + [a])

        rec(0, d, [])
        polys = []
        for exps in out:
            p = self.ring.one()
            for f, a in zip(self.invariants, exps):
                if a:
                    p = p * f ** a
            polys.append((exps, p))
        self._inv_mono_cache[d] = polys
        return polys

    def _system(self, d: int):
        """Columns (w, invariant monomial) spanning y-degree d, with the monomial list."""
        if d in self._systems:
            return self._systems[d]
        cols = []
        polys = []
        for w in self.rs.elements:
            k = d - w.length
            if k < 0:
                continue
            for exps, p in self.invariant_monomials(k):
                cols.append((w, exps, p))
                polys.append(p * self.family.R[w])
        monos = sorted({m for p in polys for m in p.terms})
        mat = [[p.terms.get(m, ZERO) for p in polys] for m in monos]
        self._systems[d] = (cols, monos, mat)
        return self._systems[d]

    def expand(self, f: Poly) -> dict:
        """Map w -> g_w(x, y) with f = sum_w g_w R_w(y)."""
        ring = self.ring
        y = self.yidx
        # group terms by (x-part exponent, y-degree)
        buckets: dict = {}
        for e, c in f.terms.items():
            xe = tuple(0 if i in y else a for i, a in enumerate(e))
            ye = tuple(a if i in y else 0 for i, a in enumerate(e))
            d = sum(ye)
            buckets.setdefault(d, {}).setdefault(xe, {})[ye] = c
        g = {w: ring.zero() for w in self.rs.elements}
        for d, by_x in buckets.items():
            cols, monos, mat = self._system(d)
            xs = sorted(by_x)
            rhs = [[by_x[xe].get(m, ZERO) for m in monos] for xe in xs]
            extra = {m for xe in xs for m in by_x[xe]} - set(monos)
            if extra:
                raise ConventionError("polynomial has y-monomials outside the span of the R_w")
            sols = solve_many(mat, rhs) if cols else [[] for _ in xs]
            for xe, sol in zip(xs, sols):
                if sol is None:
                    raise ConventionError(f"expansion system inconsistent in y-degree {d}")
                xmono = ring.monomial(xe)
                for (w, exps, p), coef in zip(cols, sol):
                    if coef != 0:
                        g[w] = g[w] + (p * xmono).scale(coef)
        return {w: v for w, v in g.items()}

    def recombine(self, g: dict) -> Poly:
        out = self.ring.zero()
        for w, gw in g.items():
            if gw:
                out = out + gw * self.family.R[w]
        return out


def expand_in_schubert_basis(rs: RootSystem, f: Poly) -> dict:
    return SchubertExpander(rs, f.ring).expand(f)


# --- the F package ------------------------------------------------------------

def graph_substitution(rs: RootSystem, ring: PolyRing, w: WeylElement) -> list:
    """Values for all variables realising y = w x (x unchanged)."""
    xi, yi = ring.blocks["x"], ring.blocks["y"]
    vals = [ring.gen(i) for i in range(ring.nvars)]
    for j, v in enumerate(yi):
        terms = {}
        for k, u in enumerate(xi):
            c = w.matrix[j][k]
            if c != 0:
                e = [0] * ring.nvars
                e[u] = 1
                terms[tuple(e)] = c
        vals[v] = Poly(ring, terms)
    return vals


def on_graph(rs: RootSystem, f: Poly, w: WeylElement) -> Poly:
    """f(x, w x) as a polynomial in the x variables."""
    return f.subs(graph_substitution(rs, f.ring, w), f.ring)


def coroot_form(ring: PolyRing, coroot: Sequence, block: str = "x") -> Poly:
    return ring.linear_form(coroot, block)


def _small_vectors(n: int, bound: int = 3):
    vecs = [v for v in product(range(-bound, bound + 1), repeat=n) if any(v)]
    vecs.sort(key=lambda v: (sum(abs(a) for a in v), [-a for a in v]))
    return vecs


@dataclass
class ChainStep:
    i: int
    w_i: WeylElement
    v_i: tuple
    gamma_i: Poly | None
    Q_i: Poly


@dataclass
class FPackage:
    rs: RootSystem
    ring: PolyRing
    Qprime: Poly
    Q: Poly
    F: Poly
    g: dict                  # w -> g_w(x, y)
    gw: dict                 # w -> g_w(x, x)
    c_vectors: dict          # w -> c_w used in Q'
    Q_on_w0: Poly
    gamma_product: Poly
    expander: SchubertExpander = field(repr=False)

    def chain(self, word: Sequence[int]) -> list:
        """Chain data (w_i, v_i, gamma_i, Q_i), i = 0..r, for a reduced word of w0."""
        rs = self.rs
        word = tuple(word)
        r = len(word)
        if rs.element_from_word(word) != rs.w0 or r != rs.w0.length:
            raise ValueError(f"{word_to_str(word)} is not a reduced word for w0")
        Qs = [None] * (r + 1)
        Qs[r] = self.Q
        for i in range(r, 0, -1):
            Qs[i - 1] = demazure_simple(rs, Qs[i], word[i - 1], "y")
        steps = []
        for i in range(r + 1):
            w_i = rs.element_from_word(tuple(reversed(word[:i])))
            v_i = word[i:]
            gamma = None
            if i >= 1:
                w_prev = rs.element_from_word(tuple(reversed(word[:i - 1])))
                a = word[i - 1]
                # gamma_i(x) = <w_{i-1} x, alpha_{s_i}^vee>: row a of the matrix of w_{i-1}
                gamma = self.ring.linear_form(list(w_prev.matrix[a - 1]), "x")
            steps.append(ChainStep(i, w_i, v_i, gamma, Qs[i]))
        return steps


def construct_F(rs: RootSystem | str, check: bool = True) -> FPackage:
    if isinstance(rs, str):
        rs = build_root_system(rs)
    ring = xy_ring(rs)
    n = rs.rank
    w0 = rs.w0
    xs = ring.block_gens("x")
    ys = ring.block_gens("y")
    Qp = ring.one()
    cvec = {}
    for w in rs.elements:
        if w == w0:
            continue
        diff = [[w0.matrix[j][k] - w.matrix[j][k] for k in range(n)] for j in range(n)]
        for c in _small_vectors(n):
            row = [sum((c[j] * diff[j][k] for j in range(n)), ZERO) for k in range(n)]
            if any(v != 0 for v in row):
                break
        cvec[w] = c
        wx = [ring.linear_form(list(w.matrix[j]), "x") for j in range(n)]
        form = ring.zero()
        for j in range(n):
            if c[j]:
                form = form + (ys[j] - wx[j]).scale(qq(c[j]))
        Qp = Qp * form
    ex = SchubertExpander(rs, ring)
    g = ex.expand(Qp)
    if check and ex.recombine(g) != Qp:
        raise ConventionError("Schubert expansion does not recombine to Q'")
    diag = [ring.gen(i) for i in range(ring.nvars)]
    for j, v in enumerate(ring.blocks["y"]):
        diag[v] = xs[j]
    gw = {w: p.subs(diag, ring) for w, p in g.items()}
    Q = ring.zero()
    for w, p in gw.items():
        if p:
            Q = Q + p * ex.family.R[w]
    Qw0 = on_graph(rs, Q, w0)
    gamma = ring.one()
    for cor in rs.positive_coroots:
        gamma = gamma * coroot_form(ring, cor, "x")
    if not Qw0:
        raise ConventionError("Q(x, w0 x) vanishes identically")
    try:
        F = (Q * gamma).exact_div(Qw0)
    except ArithmeticError as exc:
        raise ConventionError("Q(x, w0 x) does not divide Q * prod gamma") from exc
    pkg = FPackage(rs, ring, Qp, Q, F, g, gw, cvec, Qw0, gamma, ex)
    if check:
        rep = verify_F(pkg)
        if not rep["ok"]:
            raise ConventionError(f"F-package conditions fail: {rep['failures']}")
    return pkg


def coinvariant_xy_ideal(rs: RootSystem, ring: PolyRing) -> Ideal:
    """J_W = (x-block) + (positive-degree y-invariants); equals I_W + (x)."""
    group = [w.coroot_action() for w in rs.elements]
    inv = fundamental_invariants(group, ring, ring.blocks["y"])
    return Ideal(ring, ring.block_gens("x") + inv)


def verify_F(pkg: FPackage) -> dict:
    rs = pkg.rs
    failures = []
    for v in rs.elements:
        val = on_graph(rs, pkg.F, v)
        if v == rs.w0:
            if val != pkg.gamma_product:
                failures.append(f"F(x, w0 x) != prod gamma: {val}")
        elif val:
            failures.append(f"F(x, {v.name()} x) != 0")
    J = coinvariant_xy_ideal(rs, pkg.ring)
    nf = J.normal_form(pkg.F)
    if not nf:
        failures.append("F vanishes in the coinvariant algebra")
    return {"ok": not failures, "failures": failures, "normal_form": str(nf)}


def bgg_chain_report(pkg: FPackage, word: Sequence[int]) -> dict:
    """Checks of the chain identities for one reduced word of w0."""
    rs = pkg.rs
    steps = pkg.chain(word)
    r = len(steps) - 1
    ring = pkg.ring
    entries = []
    failures = []
    for st in steps:
        i = st.i
        deg_y = st.Q_i.degree_in("y")
        ok_deg = deg_y == i
        tail = ring.one()
        for later in steps[i + 1:]:
            tail = tail * later.gamma_i
        lhs = on_graph(rs, st.Q_i, st.w_i) * tail
        rhs = pkg.Q_on_w0.scale(-1 if (r - i) % 2 else 1)
        ok_top = lhs == rhs
        vanish_fail = []
        for w in rs.elements:
            if not bruhat_leq(rs, st.w_i, w):
                if on_graph(rs, st.Q_i, w):
                    vanish_fail.append(w.name())
        if not ok_deg:
            failures.append(f"i={i}: deg_y Q_i = {deg_y}")
        if not ok_top:
            failures.append(f"i={i}: Q_i(x, w_i x) * prod gamma_j != (-1)^(r-i) Q(x, w0 x)")
        for name in vanish_fail:
            failures.append(f"i={i}: Q_i(x, w x) != 0 for w = {name}")
        entries.append({
            "i": i, "w_i": st.w_i.name(), "v_i": word_to_str(st.v_i),
            "gamma_i": str(st.gamma_i) if st.gamma_i is not None else None,
            "deg_y": deg_y, "degree_ok": ok_deg, "top_identity_ok": ok_top,
            "vanishing_ok": not vanish_fail, "Q_i": str(st.Q_i),
        })
    ell = rs.w0.length
    lhs = pkg.gw[rs.w0] * pkg.gamma_product
    rhs = pkg.Q_on_w0.scale(-1 if ell % 2 else 1)
    top_ok = lhs == rhs
    if not top_ok:
        failures.append("g_w0(x, x) * prod gamma != (-1)^l Q(x, w0 x)")
    return {"word": word_to_str(word), "steps": entries, "g_w0_identity_ok": top_ok,
            "ok": not failures, "failures": failures}
