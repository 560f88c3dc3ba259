"""Finite groups acting on polynomial rings and on graded modules given by presentations.

A group element is stored by its matrix A on the span of the variables,
x_i -> sum_j A[j][i] x_j.  On points of V (where the variables are
coordinates) the same element acts by (A^{-1})^T.
Module generators carry matrices rho(g) with g.e_j = sum_i rho[i][j] e_i.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from ..exact.invariants import act, freeze, fundamental_invariants, group_closure, is_pseudo_reflection
from ..exact.linalg import identity, inverse, matmul, matvec, nullspace, rank, row_space_basis, transpose
from ..exact.modules import ModulePresentation, Submodule
from ..exact.polynomial import Poly, PolyRing
from ..exact.scalars import ONE, ZERO, Cyclotomic, qq


class ActionError(ValueError):
    pass


class GroupAction:
    """Finite group given by generator matrices on the variables of ``ring``."""

    def __init__(self, ring: PolyRing, generators: Sequence, name: str = "",
                 coxeter: bool = False):
        self.ring = ring
        self.name = name
        self.generators = [[list(r) for r in A] for A in generators]
        n = ring.nvars
        for A in self.generators:
            if len(A) != n or any(len(r) != n for r in A):
                raise ActionError("generator matrix has the wrong size")
        self.elements = group_closure(self.generators) if self.generators else [identity(n)]
        self.index = {freeze(A): k for k, A in enumerate(self.elements)}
        self._inv_cache = None
        self._refl = None
        # for a Coxeter presentation, the generators are the simple reflections
        self.simple_indices = [self.index[freeze(A)] for A in self.generators] if coxeter else None

    @property
    def order(self) -> int:
        return len(self.elements)

    def element_index(self, A) -> int:
        return self.index[freeze(A)]

    def act_poly(self, k: int, f: Poly) -> Poly:
        return act(self.elements[k], f)

    def point_matrix(self, k: int) -> list:
        return transpose(inverse(self.elements[k]))

    def act_point(self, k: int, v: Sequence) -> list:
        return matvec(self.point_matrix(k), list(v))

    def stabilizer(self, v: Sequence) -> list:
        """Indices of elements fixing the point v (brute force over the group)."""
        out = []
        for k in range(self.order):
            if all(a == b for a, b in zip(self.act_point(k, v), v)):
                out.append(k)
        return out

    def reflections(self) -> list:
        """Indices of all pseudo-reflections."""
        if self._refl is None:
            self._refl = [k for k, A in enumerate(self.elements) if is_pseudo_reflection(A)]
        return self._refl

    def fixed_hyperplane(self, k: int) -> list:
        """Basis of the fixed space of element k acting on points."""
        P = self.point_matrix(k)
        n = len(P)
        D = [[P[i][j] - (ONE if i == j else ZERO) for j in range(n)] for i in range(n)]
        return nullspace(D, n)

    def reflection_form(self, k: int):
        """(coefficients of l_r, chi): l_r is the non-trivial eigenvector of r on the variables."""
        A = self.elements[k]
        n = len(A)
        D = [[A[i][j] - (ONE if i == j else ZERO) for j in range(n)] for i in range(n)]
        col = None
        for j in range(n):
            c = [D[i][j] for i in range(n)]
            if any(v != 0 for v in c):
                col = c
                break
        if col is None:
            raise ActionError("identity is not a reflection")
        Ac = matvec(A, col)
        i = next(i for i, v in enumerate(col) if v != 0)
        chi = Ac[i] / col[i]
        if any(Ac[t] != chi * col[t] for t in range(n)):
            raise ActionError("element is not a pseudo-reflection")
        return col, chi

    def invariants(self) -> list:
        if self._inv_cache is None:
            self._inv_cache = fundamental_invariants(self.elements, self.ring)
        return self._inv_cache

    def det_series(self, k: int) -> list:
        """Coefficients of det(I - t A_k), low degree first (Faddeev-LeVerrier)."""
        A = self.elements[k]
        n = len(A)
        cs = [ONE]
        M = identity(n)
        for m in range(1, n + 1):
            AM = matmul(A, M)
            c = -sum((AM[i][i] for i in range(n)), ZERO) / m
            cs.append(c)
            M = [[AM[i][j] + (c if i == j else ZERO) for j in range(n)] for i in range(n)]
        return cs


def weyl_group_action(rs, ring: PolyRing | None = None, simple_only: bool = True) -> GroupAction:
    """The Weyl group of ``rs`` acting on the simple coroot variables."""
    from ..demazure import y_ring
    if ring is None:
        ring = PolyRing([f"x{i + 1}" for i in range(rs.rank)])
    gens = [s.coroot_action() for s in rs.simple_reflections]
    return GroupAction(ring, gens, name=rs.label, coxeter=True)


def cyclic_action(m: int, k: int = 1, ring: PolyRing | None = None) -> GroupAction:
    """Z/m acting on one variable by zeta_m^k."""
    from ..exact.scalars import zeta
    if ring is None:
        ring = PolyRing(["x1"])
    return GroupAction(ring, [[[zeta(m, k)]]], name=f"Z{m}")


class EquivariantModule:
    """Graded module coker(relations) with a compatible group action on generators."""

    def __init__(self, presentation: ModulePresentation, group: GroupAction,
                 gen_action: Sequence, recipe: dict | None = None, check: bool = True):
        self.presentation = presentation
        self.group = group
        self.ring = presentation.ring
        self.rank = presentation.rank
        self.recipe = recipe or {}
        r = self.rank
        gen_action = [[list(row) for row in M] for M in gen_action]
        if len(gen_action) != len(group.generators):
            raise ActionError("need one module action matrix per group generator")
        for M in gen_action:
            if len(M) != r or any(len(row) != r for row in M):
                raise ActionError("module action matrix has the wrong size")
        self.gen_action = gen_action
        self.rho = self._close()
        self._sub = None
        if check:
            self.check_compatible()

    def _close(self) -> list:
        """rho(g) for every group element, by BFS over generator words."""
        G = self.group
        r = self.rank
        rho = [None] * G.order
        e = G.element_index(identity(self.ring.nvars))
        rho[e] = identity(r)
        frontier = [e]
        while frontier:
            nxt = []
            for k in frontier:
                for A, R in zip(G.generators, self.gen_action):
                    j = G.element_index(matmul(G.elements[k], A))
                    M = matmul(rho[k], R)
                    if rho[j] is None:
                        rho[j] = M
                        nxt.append(j)
                    elif freeze(rho[j]) != freeze(M):
                        raise ActionError("module action matrices violate the group relations")
            frontier = nxt
        return rho

    @property
    def gen_degrees(self) -> list:
        return self.presentation.gen_degrees

    @property
    def relations(self) -> list:
        return self.presentation.relations

    def submodule(self) -> Submodule:
        if self._sub is None:
            self._sub = self.presentation.submodule()
        return self._sub

    def act_vec(self, k: int, vec: Sequence[Poly]) -> list:
        """g_k applied to a vector of the free module on the generators."""
        G = self.group
        R = self.rho[k]
        moved = [G.act_poly(k, p) if p else p for p in vec]
        out = [self.ring.zero() for _ in range(self.rank)]
        for j, p in enumerate(moved):
            if not p:
                continue
            for i in range(self.rank):
                c = R[i][j]
                if c != 0:
                    out[i] = out[i] + p.scale(c)
        return out

    def check_compatible(self) -> None:
        sub = self.submodule()
        for k in range(len(self.group.generators)):
            idx = self.group.element_index(self.group.generators[k])
            for col in self.relations:
                if not sub.contains(self.act_vec(idx, col)):
                    raise ActionError("relation submodule is not stable under the group")
        if not self.presentation.check_homogeneous():
            raise ActionError("presentation is not homogeneous")

    def is_zero(self) -> bool:
        sub = self.submodule()
        for j in range(self.rank):
            e = [self.ring.zero() for _ in range(self.rank)]
            e[j] = self.ring.one()
            if not sub.contains(e):
                return False
        return True

    def direct_sum(self, other: "EquivariantModule") -> "EquivariantModule":
        if other.group is not self.group:
            raise ActionError("direct sum needs the same group")
        r1, r2 = self.rank, other.rank
        z = self.ring.zero()
        rels = [list(c) + [z] * r2 for c in self.relations] + [[z] * r1 + list(c) for c in other.relations]
        pres = ModulePresentation(self.ring, self.gen_degrees + other.gen_degrees, rels)
        acts = []
        for A, B in zip(self.gen_action, other.gen_action):
            M = [[ZERO] * (r1 + r2) for _ in range(r1 + r2)]
            for i in range(r1):
                for j in range(r1):
                    M[i][j] = A[i][j]
            for i in range(r2):
                for j in range(r2):
                    M[r1 + i][r1 + j] = B[i][j]
            acts.append(M)
        return EquivariantModule(pres, self.group, acts,
                                 {"direct_sum": [self.recipe, other.recipe]})


# --- strata of the reflection arrangement ----------------------------------------------

@dataclass
class Stratum:
    flat: list                  # echelon basis of the flat (points of V)
    dim: int
    reflections: list           # indices of reflections whose hyperplane contains the flat
    stabilizer: list            # indices of the subgroup they generate
    witness: list
    brute_stabilizer: list
    orbit: int = 0              # index of the W-orbit class

    def to_dict(self, G: GroupAction) -> dict:
        from ..exact.scalars import format_scalar
        return {"dim": self.dim, "witness": [format_scalar(c) for c in self.witness],
                "stabilizer_order": len(self.stabilizer), "reflections": len(self.reflections),
                "orbit_class": self.orbit}


def _span_key(vectors) -> tuple:
    if not vectors:
        return ()
    basis = row_space_basis([list(v) for v in vectors])
    return freeze(basis)


def _intersect(A, B, n):
    """Intersection of two subspaces given by bases."""
    if not A or not B:
        return []
    # v = sum a_i A_i = sum b_j B_j
    M = [[A[i][k] for i in range(len(A))] + [-B[j][k] for j in range(len(B))] for k in range(n)]
    ns = nullspace(M, len(A) + len(B))
    out = []
    for s in ns:
        v = [sum((s[i] * A[i][k] for i in range(len(A))), ZERO) for k in range(n)]
        out.append(v)
    return row_space_basis(out) if out else []


def _contains(big, small) -> bool:
    if not small:
        return True
    return rank(list(big) + list(small)) == len(big)


def _subgroup(G: GroupAction, gens: Sequence[int]) -> list:
    e = G.element_index(identity(G.ring.nvars))
    out = {e}
    frontier = [e]
    while frontier:
        nxt = []
        for k in frontier:
            for g in gens:
                j = G.element_index(matmul(G.elements[k], G.elements[g]))
                if j not in out:
                    out.add(j)
                    nxt.append(j)
        frontier = nxt
    return sorted(out)


def _witness(flat, avoid, n):
    """Rational point of span(flat) off every subspace in ``avoid``."""
    if not flat:
        return [ZERO] * n
    primes = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]
    for t in range(200):
        coeffs = [qq(primes[(t + i) % len(primes)] + t * (i + 1)) / (i + 2) for i in range(len(flat))]
        v = [sum((c * b[k] for c, b in zip(coeffs, flat)), ZERO) for k in range(n)]
        if all(not _contains(H, [v]) for H in avoid):
            return v
    raise RuntimeError("witness search exhausted its sample sequence")


def strata(G: GroupAction) -> list:
    """Flats of the reflection arrangement with parabolic stabilizers and witness points."""
    n = G.ring.nvars
    refl = G.reflections()
    hyper = {}
    for k in refl:
        key = _span_key(G.fixed_hyperplane(k))
        hyper.setdefault(key, []).append(k)
    full = row_space_basis(identity(n))
    flats = {_span_key(full): list(full)}
    frontier = [list(full)]
    while frontier:
        nxt = []
        for F in frontier:
            for key in hyper:
                I = _intersect(F, [list(r) for r in key], n)
                kk = _span_key(I)
                if kk not in flats:
                    flats[kk] = [list(r) for r in kk]
                    nxt.append(flats[kk])
        frontier = nxt
    out = []
    for key, F in flats.items():
        rs = [k for hk, ks in hyper.items() for k in ks if _contains([list(r) for r in hk], F)]
        stab = _subgroup(G, rs)
        smaller = [f for kk, f in flats.items() if kk != key and _contains(F, f) and len(f) < len(F)]
        # a witness must avoid every hyperplane not containing the flat
        avoid = [[list(r) for r in hk] for hk in hyper if not _contains([list(r) for r in hk], F)]
        w = _witness(F, avoid, n)
        brute = G.stabilizer(w)
        out.append(Stratum(F, len(F), sorted(rs), stab, w, brute))
    out.sort(key=lambda s: (s.dim, [str(c) for c in s.witness]))
    # orbit classes under G
    classes = []
    for s in out:
        for ci, rep in enumerate(classes):
            if rep.dim == s.dim and any(_span_key([G.act_point(k, v) for v in s.flat]) == _span_key(rep.flat)
                                        for k in range(G.order)):
                s.orbit = ci
                break
        else:
            s.orbit = len(classes)
            classes.append(s)
    return out
