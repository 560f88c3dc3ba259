"""Finite matrix groups acting on polynomial rings; Reynolds operator and invariants.

Group elements are square matrices A acting on the span of a block of
variables by x_i -> sum_j A[j][i] x_j, so composition of substitutions
matches matrix multiplication: (AB).f = A.(B.f).
"""

from __future__ import annotations

from typing import Sequence

from .groebner import Ideal
from .hilbert import quotient_dim
from .linalg import identity, matmul, rank, row_space_basis
from .polynomial import Poly, PolyRing, monomials_of_degree
from .scalars import ONE, ZERO, Cyclotomic, qq


class NotPseudoReflectionGroup(ValueError):
    pass


def freeze(A) -> tuple:
    return tuple(tuple(r) for r in A)


def group_closure(generators: Sequence, limit: int = 10000) -> list:
    """All products of the generators (BFS from the identity)."""
    n = len(generators[0]) if generators else 0
    e = freeze(identity(n))
    seen = {e: None}
    order = [e]
    frontier = [e]
    while frontier:
        nxt = []
        for g in frontier:
            for s in generators:
                h = freeze(matmul(g, s))
                if h not in seen:
                    seen[h] = None
                    order.append(h)
                    nxt.append(h)
                    if len(order) > limit:
                        raise ValueError("group closure exceeded limit; group infinite?")
        frontier = nxt
    return [[list(r) for r in g] for g in order]


def act(A, f: Poly, block: Sequence[int] | None = None) -> Poly:
    """Apply the group element A to f, acting on the variables ``block``."""
    ring = f.ring
    idx = list(block) if block is not None else list(range(ring.nvars))
    vals = [ring.gen(i) for i in range(ring.nvars)]
    for a, i in enumerate(idx):
        terms = {}
        for b, j in enumerate(idx):
            c = A[b][a]
            if c != 0:
                e = [0] * ring.nvars
                e[j] = 1
                terms[tuple(e)] = c
        vals[i] = Poly(ring, terms)
    return f.subs(vals, ring)


def reynolds(group: Sequence, f: Poly, block=None) -> Poly:
    acc: dict = {}
    for A in group:
        for e, c in act(A, f, block).terms.items():
            acc[e] = acc.get(e, ZERO) + c
    inv = ONE / len(group)
    return Poly(f.ring, {e: c * inv for e, c in acc.items() if c != 0})


def _coords(polys: Sequence[Poly], monos: Sequence[tuple]) -> list:
    return [[p.terms.get(m, ZERO) for m in monos] for p in polys]


def _from_coords(ring: PolyRing, rows, monos) -> list:
    return [Poly(ring, {m: c for m, c in zip(monos, r) if c != 0}) for r in rows]


def invariant_basis(group: Sequence, ring: PolyRing, d: int, block=None) -> list:
    """Basis of the degree-d invariants in the variables of ``block``."""
    idx = list(block) if block is not None else list(range(ring.nvars))
    monos = []
    for e in monomials_of_degree(len(idx), d):
        full = [0] * ring.nvars
        for k, i in zip(e, idx):
            full[i] = k
        monos.append(tuple(full))
    avgs = [reynolds(group, ring.monomial(m), block) for m in monos]
    rows = row_space_basis(_coords(avgs, monos))
    return _from_coords(ring, rows, monos)


def _jacobian_nonzero(polys: Sequence[Poly], idx: Sequence[int]) -> bool:
    """Algebraic independence test: the Jacobian determinant is not identically zero."""
    from .linalg import det
    ring = polys[0].ring
    # evaluate at a few rational points; a nonzero value certifies independence
    pts = [[qq(3 + 7 * k + 2 * j * j) / (k + j + 2) for j in range(ring.nvars)] for k in range(6)]
    for pt in pts:
        J = []
        for p in polys:
            row = []
            for i in idx:
                dp = _partial(p, i)
                row.append(dp.evaluate(pt))
            J.append(row)
        if det(J) != 0:
            return True
    return False


def _partial(p: Poly, i: int) -> Poly:
    out = {}
    for e, c in p.terms.items():
        if e[i]:
            ne = list(e)
            ne[i] -= 1
            out[tuple(ne)] = c * e[i]
    return Poly(p.ring, out)


def fundamental_invariants(group: Sequence, ring: PolyRing, block=None,
                           max_degree: int | None = None) -> list:
    """Homogeneous basic invariants f_1..f_n with prod deg f_i = |H|.

    Found degree by degree: new invariants in degree d are a complement of
    the products of earlier ones.  Raises NotPseudoReflectionGroup when the
    invariant ring is not polynomial.
    """
    idx = list(block) if block is not None else list(range(ring.nvars))
    n = len(idx)
    order = len(group)
    if max_degree is None:
        max_degree = order  # Noether bound
    basics: list = []
    inv_by_deg = {0: [ring.one()]}
    for d in range(1, max_degree + 1):
        full = invariant_basis(group, ring, d, block)
        inv_by_deg[d] = full
        if not full:
            continue
        # decomposables: products of a basic invariant with invariants of complementary degree
        decomp = []
        for f in basics:
            k = f.degree()
            for g in inv_by_deg.get(d - k, []):
                if d - k > 0:
                    decomp.append(f * g)
        monos = sorted({m for p in full + decomp for m in p.terms})
        base = row_space_basis(_coords(decomp, monos)) if decomp else []
        r = len(base)
        for f in full:
            if rank(base + _coords([f], monos)) > r:
                base = row_space_basis(base + _coords([f], monos))
                r += 1
                basics.append(f)
        prod = 1
        for f in basics:
            prod *= f.degree()
        if len(basics) == n and prod == order:
            break
        if len(basics) > n:
            raise NotPseudoReflectionGroup(
                f"invariant ring needs more than {n} generators (found {len(basics)})")
    prod = 1
    for f in basics:
        prod *= f.degree()
    if len(basics) != n or prod != order:
        raise NotPseudoReflectionGroup(
            f"basic invariants have degrees {[f.degree() for f in basics]}, product {prod} != |H| = {order}")
    if not _jacobian_nonzero(basics, idx):
        raise NotPseudoReflectionGroup("basic invariants are algebraically dependent")
    return basics


def coinvariant_ideal(group: Sequence, ring: PolyRing, block=None, check: bool = True) -> Ideal:
    """Ideal generated by positive-degree invariants; dimension |H| is verified."""
    inv = fundamental_invariants(group, ring, block)
    I = Ideal(ring, inv)
    if check and block is None:
        dim = quotient_dim(I)
        if dim != len(group):
            raise NotPseudoReflectionGroup(f"coinvariant dimension {dim} != |H| = {len(group)}")
    return I


def is_pseudo_reflection(A) -> bool:
    """Finite-order A != 1 fixing a hyperplane: rank(A - 1) == 1."""
    n = len(A)
    D = [[A[i][j] - (ONE if i == j else ZERO) for j in range(n)] for i in range(n)]
    return rank(D) == 1


def scalar_field_order(group: Sequence) -> int:
    for A in group:
        for r in A:
            for c in r:
                if isinstance(c, Cyclotomic):
                    return c.m
    return 1
