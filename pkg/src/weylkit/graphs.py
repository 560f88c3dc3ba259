"""Graph ideals, unions of graphs, flatness of the first projection and coarse fibers.

graph(g) = {(x, y) : y = g x} for a linear or affine Weyl group element g,
with ideal generated by the linear forms y_j - (g x)_j.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .affine import (AffineElement, AffineWeylGroup, integral_root_subsystem,
                     orbit_decomposition, special_points, stabilizer, generic_points)
from .coxeter import (RootSystem, WeylElement, enumerate_closed_subsets,
                      first_closure_violation, poincare_polynomial)
from .demazure import construct_F, demazure, xy_ring
from .exact.groebner import Ideal, ideal_intersect_many
from .exact.hilbert import HilbertSeries, quotient_dim, quotient_hilbert, standard_monomials
from .exact.invariants import fundamental_invariants
from .exact.linalg import identity, kernel_of_maps, matmul, rank
from .exact.polynomial import Poly, PolyRing, monomials_of_degree
from .exact.scalars import ZERO, qq


class NotClosedError(ValueError):
    def __init__(self, u, w):
        super().__init__(f"S is not closed: {u.name()} <= {w.name()} but {u.name()} is missing")
        self.u = u
        self.w = w


def _parts(g):
    if isinstance(g, AffineElement):
        return g.w.matrix, g.mu
    return g.matrix, None


def graph_ideal(g, ring: PolyRing) -> Ideal:
    """Ideal of {y = g x}: generators y_j - (w x + mu)_j."""
    M, mu = _parts(g)
    xi, yi = ring.blocks["x"], ring.blocks["y"]
    gens = []
    for j, v in enumerate(yi):
        terms = {}
        e = [0] * ring.nvars
        e[v] = 1
        terms[tuple(e)] = qq(1)
        for k, u in enumerate(xi):
            c = M[j][k]
            if c != 0:
                e = [0] * ring.nvars
                e[u] = 1
                terms[tuple(e)] = -c
        if mu is not None and mu[j] != 0:
            terms[(0,) * ring.nvars] = -mu[j]
        gens.append(Poly(ring, terms))
    return Ideal(ring, gens)


@dataclass
class GraphIdealBundle:
    S: list
    ring: PolyRing
    I_S: Ideal
    J_S: Ideal

    def quotient_dim(self):
        return quotient_dim(self.J_S)


_UNION_CACHE: dict = {}


def union_ideal(S: Sequence, ring: PolyRing | None = None, rank_n: int | None = None) -> GraphIdealBundle:
    """I_S = intersection of graph ideals, J_S = I_S + (x_1, ..., x_n)."""
    S = list(S)
    if not S:
        raise ValueError("empty subset")
    if ring is None:
        n = len(_parts(S[0])[0])
        ring = PolyRing.block_ring(n, ("x", "y"))
    key = (ring.names, frozenset((_parts(g)[0], _parts(g)[1]) for g in S))
    if key in _UNION_CACHE:
        I = _UNION_CACHE[key]
    else:
        I = ideal_intersect_many([graph_ideal(g, ring) for g in S])
        _UNION_CACHE[key] = I
    J = Ideal(ring, I.groebner() + ring.block_gens("x"))
    return GraphIdealBundle(S, ring, I, J)


# --- finite groups: Borel presentation and closed subsets ---------------------------

def verify_borel_product(rs: RootSystem, closed_subsets: bool = True) -> dict:
    ring = xy_ring(rs)
    bundle = union_ideal(rs.elements, ring)
    hs = quotient_hilbert(bundle.I_S)
    expected = HilbertSeries.make(poincare_polynomial(rs), rs.rank)
    dimJ = bundle.quotient_dim()
    out = {"type": rs.label, "order": rs.order, "hilbert_series": str(hs),
           "expected_series": str(expected), "series_ok": hs == expected,
           "dim_J_W": dimJ, "dim_ok": dimJ == rs.order, "closed": []}
    ok = out["series_ok"] and out["dim_ok"]
    if closed_subsets:
        pkg = construct_F(rs)
        for Z in enumerate_closed_subsets(rs):
            if not Z:
                continue
            rep = closed_subset_basis(rs, Z, pkg)
            out["closed"].append(rep)
            ok = ok and rep["ok"]
    out["ok"] = ok
    return out


def basis_indices(rs: RootSystem, Z, convention: str = "graph") -> list:
    """Indices u whose D_{1 x u} F give the basis of Sym/J_Z.

    With graphs {y = w x} the index set is {u : u w0 in Z}; the
    ``"inverse"`` convention (graphs {y = w^{-1} x}) gives {u : w0 u^{-1} in Z}.
    """
    Z = set(Z)
    w0 = rs.w0
    if convention == "graph":
        return [u for u in rs.elements if u * w0 in Z]
    if convention == "inverse":
        return [u for u in rs.elements if w0 * u.inverse() in Z]
    raise ValueError(convention)


def closed_subset_basis(rs: RootSystem, Z, pkg=None, convention: str = "graph") -> dict:
    Z = sorted(Z, key=lambda g: (g.length, g.word))
    if pkg is None:
        pkg = construct_F(rs)
    bundle = union_ideal(Z, pkg.ring)
    dim = bundle.quotient_dim()
    idx = basis_indices(rs, Z, convention)
    polys = [demazure(rs, pkg.F, u.word, "y") for u in idx]
    nfs = [bundle.J_S.normal_form(p) for p in polys]
    monos = sorted({m for p in nfs for m in p.terms})
    r = rank([[p.terms.get(m, ZERO) for m in monos] for p in nfs]) if monos else 0
    ok = dim == len(Z) and r == len(Z) and len(idx) == len(Z)
    return {"S": [g.name() for g in Z], "size": len(Z), "dim_J_S": dim,
            "basis": [u.name() for u in idx], "basis_rank": r, "ok": ok}


# --- fibers of the first projection --------------------------------------------------

@dataclass
class FiberReport:
    point: tuple
    total: int
    blocks: list                 # per image point: {"point", "elements", "group_count", "length"}
    expected: int
    verdict: str

    def to_dict(self) -> dict:
        return {"point": [str(c) for c in self.point], "total": self.total,
                "blocks": self.blocks, "expected": self.expected, "verdict": self.verdict}


def _specialize(I: Ideal, x0: Sequence, yring: PolyRing) -> Ideal:
    ring = I.ring
    xi, yi = ring.blocks["x"], ring.blocks["y"]
    vals = [None] * ring.nvars
    for k, u in enumerate(xi):
        vals[u] = yring.const(x0[k])
    for k, v in enumerate(yi):
        vals[v] = yring.gen(k)
    return Ideal(yring, [g.subs(vals, yring) for g in I.groebner()])


def local_length(I: Ideal, p: Sequence) -> int:
    """Length of the local ring of k[y]/I at the rational point p.

    This is the dimension of the joint generalized eigenspace at p of the
    multiplication operators y_i on k[y]/I.
    """
    ring = I.ring
    n = ring.nvars
    sm = standard_monomials(I.leading_monomials(), n)
    if sm is None:
        raise ValueError("fiber is not finite")
    d = len(sm)
    if d == 0:
        return 0
    index = {e: k for k, e in enumerate(sm)}
    ops = []
    for i in range(n):
        M = [[ZERO] * d for _ in range(d)]
        for k, e in enumerate(sm):
            nf = I.normal_form(Poly(ring, {e: qq(1)}) * ring.gen(i))
            for m, c in nf.terms.items():
                M[index[m]][k] = c
        N = [[M[r][c] - (p[i] if r == c else ZERO) for c in range(d)] for r in range(d)]
        P = identity(d)
        for _ in range(d):
            P = matmul(P, N)
        ops.append(P)
    return len(kernel_of_maps(ops, d))


def fiber_dimension(S: Sequence, x0: Sequence, G=None, bundle: GraphIdealBundle | None = None,
                    require_closed: bool = True, local: bool = True) -> FiberReport:
    """Length of the fiber of Gamma_S -> t* over x0, with its orbit blocks."""
    S = list(S)
    if require_closed and G is not None:
        v = first_closure_violation(G, S)
        if v is not None:
            raise NotClosedError(*v)
    if bundle is None:
        bundle = union_ideal(S)
    n = len(bundle.ring.blocks["x"])
    x0 = tuple(qq(c) for c in x0)
    yring = PolyRing([f"y{i + 1}" for i in range(n)])
    Ix = _specialize(bundle.I_S, x0, yring)
    total = quotient_dim(Ix)
    blocks = []
    for blk in orbit_decomposition(S, x0):
        p = blk[0].act(x0)
        entry = {"point": [str(c) for c in p], "elements": [g.name() for g in blk],
                 "group_count": len(blk)}
        if local and total != "infinite":
            entry["length"] = local_length(Ix, p)
        blocks.append(entry)
    ok = total == len(S)
    if local and ok:
        ok = all(b.get("length") == b["group_count"] for b in blocks)
    return FiberReport(x0, total, blocks, len(S), "PASS" if ok else "FAIL")


def flatness_report(G: AffineWeylGroup, S: Sequence, denoms=(1, 2, 3, 4), generic: int = 20,
                    seed: int = 0, require_closed: bool = True, local: bool = False) -> dict:
    S = list(S)
    if require_closed:
        v = first_closure_violation(G, S)
        if v is not None:
            raise NotClosedError(*v)
    bundle = union_ideal(S)
    pts = special_points(G.rs, denoms) + generic_points(G.rs, generic, seed)
    failures = []
    totals = set()
    for p in pts:
        rep = fiber_dimension(S, p, G, bundle, require_closed=False, local=local)
        totals.add(rep.total)
        if rep.verdict != "PASS":
            failures.append(rep.to_dict())
    return {"type": G.label, "lattice": G.lattice, "S": [g.name() for g in S], "size": len(S),
            "points": len(pts), "fiber_lengths": sorted(totals, key=str),
            "verdict": "PASS" if not failures else "FAIL", "failures": failures[:5]}


# --- coarse fibers --------------------------------------------------------------

@dataclass
class CoarseFiber:
    point: tuple
    lattice: str
    W_bracket: list
    cosets: int
    coinvariant_dim: int
    coinvariant_ideal: list
    invariant_degrees: list
    extended_stabilizer: list
    total: int

    def ok(self) -> bool:
        return self.cosets * self.coinvariant_dim == self.total

    def to_dict(self) -> dict:
        return {"point": [str(c) for c in self.point], "lattice": self.lattice,
                "W_bracket": [w.name() for w in self.W_bracket], "cosets": self.cosets,
                "coinvariant_dim": self.coinvariant_dim,
                "coinvariant_ideal": [str(g) for g in self.coinvariant_ideal],
                "invariant_degrees": self.invariant_degrees,
                "extended_stabilizer": [w.name() for w in self.extended_stabilizer],
                "total": self.total, "ok": self.ok()}


def coarse_fiber(rs: RootSystem, x: Sequence, lattice: str | None = None) -> CoarseFiber:
    """W x^{W_[x]} Spec C_[x]: coset count and coinvariant dimension of W_[x]."""
    lattice = lattice or rs.lattice
    data = stabilizer(rs, x, lattice)
    H = data.W_bracket
    ring = PolyRing([f"x{i + 1}" for i in range(rs.rank)])
    if len(H) == 1:
        gens, degs, dim = list(ring.gens()), [1] * rs.rank, 1
    else:
        group = [w.coroot_action() for w in H]
        gens = fundamental_invariants(group, ring)
        degs = [g.degree() for g in gens]
        dim = quotient_dim(Ideal(ring, gens))
        # degree-one invariants are just coordinates on the fixed space
    cosets = rs.order // len(H)
    if cosets * len(H) != rs.order:
        raise AssertionError("W_[x] is not a subgroup")
    cf = CoarseFiber(data.point, lattice, H, cosets, dim, gens, degs, data.extended, rs.order)
    if not cf.ok():
        raise AssertionError(f"coset count {cosets} x dim {dim} != |W| = {rs.order}")
    return cf
