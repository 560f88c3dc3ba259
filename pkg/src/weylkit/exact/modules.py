"""Graded modules over polynomial rings: presentations, syzygies, resolutions.

A vector in a free module of rank r is a list of r polynomials.  Internally
it becomes a term dict keyed by ``(component, *exponents)`` so the Groebner
engine can treat submodules exactly like ideals.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .groebner import buchberger, leading_monomial, normal_form_raw
from .hilbert import HilbertSeries, module_hilbert, standard_monomials
from .orders import pot_order, top_order
from .polynomial import Poly, PolyRing
from .scalars import ONE


class ResolutionTruncated(RuntimeError):
    """Raised when a resolution has not terminated within ``max_steps``."""


def vec_to_terms(vec: Sequence[Poly], offset: int = 0) -> dict:
    out = {}
    for c, p in enumerate(vec):
        for e, v in p.terms.items():
            out[(c + offset,) + e] = v
    return out


def terms_to_vec(terms: dict, ring: PolyRing, rank: int, offset: int = 0) -> list:
    parts = [dict() for _ in range(rank)]
    for m, v in terms.items():
        c = m[0] - offset
        if 0 <= c < rank:
            parts[c][m[1:]] = v
    return [Poly(ring, p) for p in parts]


def vec_degree(vec: Sequence[Poly], shifts: Sequence[int]):
    """Degree of a homogeneous vector, None for zero, raising if inhomogeneous."""
    degs = {sum(e) + shifts[c] for c, p in enumerate(vec) for e in p.terms}
    if not degs:
        return None
    if len(degs) > 1:
        raise ValueError("vector is not homogeneous")
    return degs.pop()


def is_zero_vec(vec) -> bool:
    return all(not p for p in vec)


class Submodule:
    """Submodule of a graded free module with a cached Groebner basis."""

    def __init__(self, ring: PolyRing, rank: int, gens: Sequence[Sequence[Poly]],
                 shifts: Sequence[int] | None = None, order=None):
        self.ring = ring
        self.rank = rank
        self.gens = [list(g) for g in gens if not is_zero_vec(g)]
        self.shifts = list(shifts) if shifts is not None else [0] * rank
        self.order = order if order is not None else top_order(self.shifts)
        self._gb = None
        self._lms = None

    def groebner(self) -> list:
        if self._gb is None:
            self._gb = buchberger([vec_to_terms(g) for g in self.gens], self.order, self.shifts)
            self._lms = [leading_monomial(f, self.order) for f in self._gb]
        return self._gb

    def reduce(self, vec: Sequence[Poly]) -> list:
        gb = self.groebner()
        nf = normal_form_raw(vec_to_terms(vec), gb, self._lms, self.order)
        return terms_to_vec(nf, self.ring, self.rank)

    def contains(self, vec: Sequence[Poly]) -> bool:
        gb = self.groebner()
        return not normal_form_raw(vec_to_terms(vec), gb, self._lms, self.order)

    def leading_by_component(self) -> list:
        self.groebner()
        out = [[] for _ in range(self.rank)]
        for m in self._lms:
            out[m[0]].append(m[1:])
        return out

    def quotient_hilbert(self) -> HilbertSeries:
        return module_hilbert(self.leading_by_component(), self.shifts, self.ring.nvars)

    def quotient_basis(self, degree: int) -> list:
        """Standard monomial basis (component, exponent) of (F/N)_degree."""
        out = []
        for c, lms in enumerate(self.leading_by_component()):
            d = degree - self.shifts[c]
            if d < 0:
                continue
            sm = standard_monomials(lms, self.ring.nvars, limit=d)
            out += [(c, e) for e in sm if sum(e) == d]
        return out


@dataclass
class ModulePresentation:
    """coker(F_1 -> F_0): generator degrees plus relation columns."""

    ring: PolyRing
    gen_degrees: list
    relations: list = field(default_factory=list)

    @property
    def rank(self) -> int:
        return len(self.gen_degrees)

    def relation_degrees(self) -> list:
        out = []
        for col in self.relations:
            d = vec_degree(col, self.gen_degrees)
            if d is None:
                raise ValueError("zero relation column")
            out.append(d)
        return out

    def check_homogeneous(self) -> bool:
        try:
            self.relation_degrees()
            return True
        except ValueError:
            return False

    def submodule(self) -> Submodule:
        return Submodule(self.ring, self.rank, self.relations, self.gen_degrees)

    def hilbert_series(self) -> HilbertSeries:
        return self.submodule().quotient_hilbert()


def syzygy_vectors(ring: PolyRing, rank: int, columns: Sequence[Sequence[Poly]],
                   shifts: Sequence[int]) -> list:
    """Generators of the syzygy module of ``columns`` (as vectors of length len(columns)).

    Uses the augmented module trick: a Groebner basis of the rows
    (col_j, e_j) under position-over-term with the original components
    first; basis elements living only in the e-part are the syzygies.
    """
    k = len(columns)
    if k == 0:
        return []
    col_degs = [vec_degree(c, shifts) for c in columns]
    weights = list(shifts) + [d if d is not None else 0 for d in col_degs]
    gens = []
    for j, col in enumerate(columns):
        t = vec_to_terms(col)
        t[(rank + j,) + (0,) * ring.nvars] = ONE
        gens.append(t)
    gb = buchberger(gens, pot_order(weights), weights)
    out = []
    for f in gb:
        if all(m[0] >= rank for m in f):
            out.append(terms_to_vec(f, ring, k, offset=rank))
    return out


def minimal_generators(ring: PolyRing, rank: int, vecs: Sequence[Sequence[Poly]],
                       shifts: Sequence[int]) -> list:
    """A minimal homogeneous generating set of the submodule spanned by ``vecs``."""
    items = []
    for v in vecs:
        if is_zero_vec(v):
            continue
        items.append((vec_degree(v, shifts), v))
    items.sort(key=lambda t: t[0])
    kept: list = []
    sub = None
    for d, v in items:
        if sub is not None and sub.contains(v):
            continue
        kept.append(v)
        sub = Submodule(ring, rank, kept, shifts)
    return kept


def syzygies(M: ModulePresentation) -> ModulePresentation:
    """Presentation of the first syzygy module of the relation columns."""
    syz = syzygy_vectors(M.ring, M.rank, M.relations, M.gen_degrees)
    degs = M.relation_degrees()
    syz = minimal_generators(M.ring, len(M.relations), syz, degs)
    return ModulePresentation(M.ring, degs, syz)


@dataclass
class FreeResolution:
    """F_0 <- F_1 <- ... ; ``maps[i]`` is the list of columns of d_{i+1}."""

    ring: PolyRing
    degrees: list          # degrees[i] = generator degrees of F_i
    maps: list             # maps[i]: columns (in F_i) of the images of F_{i+1} basis
    complete: bool = True

    def ranks(self) -> list:
        return [len(d) for d in self.degrees]

    def length(self) -> int:
        return len(self.maps)


def free_resolution(M: ModulePresentation, max_steps: int | None = None,
                    minimal: bool = True, strict: bool = False) -> FreeResolution:
    """Minimal graded free resolution of coker(M).

    Over a polynomial ring in n variables this stops within n steps; if
    ``max_steps`` is hit first the result is marked incomplete (or
    ResolutionTruncated is raised when ``strict``).
    """
    ring = M.ring
    if max_steps is None:
        max_steps = ring.nvars + 2
    rels = M.relations
    if minimal:
        rels = minimal_generators(ring, M.rank, rels, M.gen_degrees)
    degrees = [list(M.gen_degrees)]
    maps = []
    cur_rank, cur_shifts, cur_cols = M.rank, list(M.gen_degrees), rels
    steps = 0
    while cur_cols:
        if steps >= max_steps:
            if strict:
                raise ResolutionTruncated(f"resolution not finished after {max_steps} steps")
            return FreeResolution(ring, degrees, maps, complete=False)
        maps.append(cur_cols)
        nxt_shifts = [vec_degree(c, cur_shifts) for c in cur_cols]
        degrees.append(nxt_shifts)
        syz = syzygy_vectors(ring, cur_rank, cur_cols, cur_shifts)
        if minimal:
            syz = minimal_generators(ring, len(cur_cols), syz, nxt_shifts)
        cur_rank, cur_shifts, cur_cols = len(cur_cols), nxt_shifts, syz
        steps += 1
    return FreeResolution(ring, degrees, maps, complete=True)


def apply_matrix(cols: Sequence[Sequence[Poly]], vec: Sequence[Poly], ring: PolyRing,
                 target_rank: int) -> list:
    """Image of ``vec`` (coefficients on the source basis) under a column matrix."""
    out = [ring.zero() for _ in range(target_rank)]
    for a, col in zip(vec, cols):
        if not a:
            continue
        for i in range(target_rank):
            if col[i]:
                out[i] = out[i] + a * col[i]
    return out
