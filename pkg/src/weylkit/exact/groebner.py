"""Buchberger's algorithm with Gebauer-Moeller pair pruning and the sugar strategy.

The engine works on raw term dicts.  Monomials are exponent tuples for
ideals, or ``(component, *exponents)`` tuples for submodules of free
modules (``order.module`` is then true).
"""

from __future__ import annotations

import heapq
from typing import Sequence

from .orders import GREVLEX, MonomialOrder, block_order, get_order
from .polynomial import Poly, PolyRing
from .scalars import ONE, ZERO


# --- monomial helpers ------------------------------------------------------

def _divides(a, b, module):
    if module:
        if a[0] != b[0]:
            return False
        return all(x <= y for x, y in zip(a[1:], b[1:]))
    return all(x <= y for x, y in zip(a, b))


def _lcm(a, b, module):
    if module:
        if a[0] != b[0]:
            return None
        return (a[0],) + tuple(max(x, y) for x, y in zip(a[1:], b[1:]))
    return tuple(max(x, y) for x, y in zip(a, b))


def _quot(a, b, module):
    """Exponent of a / b (assumes b divides a); plain exponent tuple."""
    if module:
        return tuple(x - y for x, y in zip(a[1:], b[1:]))
    return tuple(x - y for x, y in zip(a, b))


def _shift(m, e, module):
    if module:
        return (m[0],) + tuple(x + y for x, y in zip(m[1:], e))
    return tuple(x + y for x, y in zip(m, e))


def _coprime(a, b, module):
    if module:
        return False  # the product criterion is invalid for modules
    return all(x == 0 or y == 0 for x, y in zip(a, b))


def _deg(m, module, weights):
    if module:
        return sum(m[1:]) + (weights[m[0]] if weights else 0)
    return sum(m)


def leading_monomial(f: dict, order: MonomialOrder):
    return max(f, key=order.key)


class _Basis:
    """Working basis: monic term dicts with their leading monomials."""

    def __init__(self, order: MonomialOrder, weights=None):
        self.order = order
        self.module = order.module
        self.weights = weights
        self.polys: list = []
        self.lms: list = []
        self.sugar: list = []
        self.alive: list = []

    def add(self, f: dict, sugar: int) -> int:
        lm = leading_monomial(f, self.order)
        c = f[lm]
        if c != 1:
            inv = ONE / c
            f = {m: v * inv for m, v in f.items()}
        self.polys.append(f)
        self.lms.append(lm)
        self.sugar.append(sugar)
        self.alive.append(True)
        return len(self.polys) - 1

    def reducer(self, m, candidates):
        module = self.module
        for i in candidates:
            if _divides(self.lms[i], m, module):
                return i
        return None


def normal_form_raw(f: dict, basis: Sequence[dict], lms: Sequence, order: MonomialOrder,
                    full: bool = True) -> dict:
    """Reduce f by monic ``basis`` (leading monomials ``lms``)."""
    module = order.module
    neg = order.neg
    rem = dict(f)
    heap = [(neg(m), m) for m in rem]
    heapq.heapify(heap)
    inheap = set(rem)
    out: dict = {}
    idx = range(len(basis))
    while heap:
        _, m = heapq.heappop(heap)
        inheap.discard(m)
        c = rem.pop(m, None)
        if c is None or c == 0:
            continue
        r = None
        for i in idx:
            if _divides(lms[i], m, module):
                r = i
                break
        if r is None:
            out[m] = c
            if not full:
                for mm, v in rem.items():
                    if v != 0:
                        out[mm] = v
                return out
            continue
        g = basis[r]
        q = _quot(m, lms[r], module)
        lm = lms[r]
        for e, v in g.items():
            if e == lm:
                continue
            mm = _shift(e, q, module)
            nv = rem.get(mm, ZERO) - c * v
            if nv != 0:
                rem[mm] = nv
                if mm not in inheap:
                    heapq.heappush(heap, (neg(mm), mm))
                    inheap.add(mm)
            else:
                rem.pop(mm, None)
    return out


def _spoly(f, lf, g, lg, lcm, module):
    a = _quot(lcm, lf, module)
    b = _quot(lcm, lg, module)
    out: dict = {}
    for e, v in f.items():
        mm = _shift(e, a, module)
        out[mm] = out.get(mm, ZERO) + v
    for e, v in g.items():
        mm = _shift(e, b, module)
        nv = out.get(mm, ZERO) - v
        out[mm] = nv
    return {m: v for m, v in out.items() if v != 0}


def buchberger(gens: Sequence[dict], order: MonomialOrder = GREVLEX, weights=None,
               reduced: bool = True) -> list:
    """Groebner basis (list of monic term dicts) of the span of ``gens``."""
    module = order.module
    B = _Basis(order, weights)
    G: list = []           # indices of the current minimal-lead basis
    pairs: list = []       # heap of (sugar, lcm negkey, counter, i, j, lcm)
    counter = 0

    def update(h):
        nonlocal G, pairs, counter
        lh = B.lms[h]
        cand = []
        for g in G:
            l = _lcm(lh, B.lms[g], module)
            if l is not None:
                cand.append((g, l))
        # chain criterion among the new pairs
        keep = []
        for k, (g, l) in enumerate(cand):
            if _coprime(lh, B.lms[g], module):
                keep.append((g, l, True))
                continue
            dominated = False
            for k2, (g2, l2) in enumerate(cand):
                if k2 == k:
                    continue
                if _divides(l2, l, module) and (l2 != l or k2 < k):
                    dominated = True
                    break
            if not dominated:
                keep.append((g, l, False))
        new_pairs = [(g, l) for g, l, cop in keep if not cop]
        # prune old pairs whose lcm is divisible by lm(h) in the strict sense
        kept_old = []
        for item in pairs:
            _, _, _, i, j, l = item
            if (_divides(lh, l, module)
                    and _lcm(B.lms[i], lh, module) != l
                    and _lcm(B.lms[j], lh, module) != l):
                continue
            kept_old.append(item)
        pairs = kept_old
        for g, l in new_pairs:
            sg = max(B.sugar[h] + _deg(l, module, weights) - _deg(lh, module, weights),
                     B.sugar[g] + _deg(l, module, weights) - _deg(B.lms[g], module, weights))
            counter += 1
            pairs.append((sg, order.neg(l), counter, g, h, l))
        heapq.heapify(pairs)
        G = [g for g in G if not _divides(lh, B.lms[g], module)] + [h]

    for f in gens:
        f = {m: v for m, v in f.items() if v != 0}
        if not f:
            continue
        nf = normal_form_raw(f, [B.polys[i] for i in G], [B.lms[i] for i in G], order)
        if not nf:
            continue
        sug = max(_deg(m, module, weights) for m in f)
        update(B.add(nf, sug))

    while pairs:
        sg, _, _, i, j, l = heapq.heappop(pairs)
        s = _spoly(B.polys[i], B.lms[i], B.polys[j], B.lms[j], l, module)
        if not s:
            continue
        basis = [B.polys[g] for g in G]
        lms = [B.lms[g] for g in G]
        nf = normal_form_raw(s, basis, lms, order)
        if nf:
            update(B.add(nf, sg))

    polys = [B.polys[g] for g in G]
    if reduced:
        polys = interreduce(polys, order)
    return polys


def interreduce(polys: Sequence[dict], order: MonomialOrder) -> list:
    """Reduced Groebner basis from a Groebner basis with minimal leading terms."""
    module = order.module
    items = []
    for f in polys:
        lm = leading_monomial(f, order)
        items.append((lm, f))
    minimal = [(lm, f) for k, (lm, f) in enumerate(items)
               if not any(_divides(lm2, lm, module) and (lm2 != lm or k2 < k)
                          for k2, (lm2, _) in enumerate(items) if k2 != k)]
    out = []
    for k, (lm, f) in enumerate(minimal):
        others = [g for k2, (_, g) in enumerate(minimal) if k2 != k]
        olms = [l for k2, (l, _) in enumerate(minimal) if k2 != k]
        c = f[lm]
        tail = {m: v for m, v in f.items() if m != lm}
        red = normal_form_raw(tail, others, olms, order)
        g = {m: v / c for m, v in red.items()}
        g[lm] = ONE
        out.append(g)
    out.sort(key=lambda g: order.key(leading_monomial(g, order)))
    return out


# --- ideals ----------------------------------------------------------------

class Ideal:
    """Ideal of a polynomial ring with a lazily computed reduced Groebner basis."""

    def __init__(self, ring: PolyRing, gens: Sequence[Poly], order=None, gb=None):
        self.ring = ring
        self.gens = [g for g in gens if g]
        self.order = get_order(order)
        self._gb = gb

    def __repr__(self):
        return f"Ideal({[str(g) for g in self.gens]})"

    def groebner(self) -> list:
        if self._gb is None:
            raw = buchberger([g.terms for g in self.gens], self.order)
            self._gb = [Poly(self.ring, f) for f in raw]
        return self._gb

    def leading_monomials(self) -> list:
        return [leading_monomial(g.terms, self.order) for g in self.groebner()]

    def normal_form(self, f: Poly) -> Poly:
        gb = self.groebner()
        nf = normal_form_raw(f.terms, [g.terms for g in gb], self.leading_monomials(), self.order)
        return Poly(self.ring, nf)

    def contains(self, f: Poly) -> bool:
        return not self.normal_form(f)

    def contains_ideal(self, other: "Ideal") -> bool:
        return all(self.contains(g) for g in other.gens)

    def __eq__(self, other):
        if not isinstance(other, Ideal):
            return NotImplemented
        return self.contains_ideal(other) and other.contains_ideal(self)

    __hash__ = None

    def is_homogeneous(self) -> bool:
        return all(g.is_homogeneous() for g in self.gens)

    def is_unit(self) -> bool:
        return any(g.is_constant() for g in self.groebner())

    def __add__(self, other):
        if isinstance(other, Ideal):
            return Ideal(self.ring, self.gens + other.gens, self.order)
        return Ideal(self.ring, self.gens + list(other), self.order)

    def with_order(self, order) -> "Ideal":
        return Ideal(self.ring, self.gens, order)


def groebner(I: Ideal, order=None) -> Ideal:
    """Return a copy of I carrying its reduced Groebner basis for ``order``."""
    J = Ideal(I.ring, I.gens, order if order is not None else I.order)
    J.groebner()
    return J


def ideal_intersect(I: Ideal, J: Ideal) -> Ideal:
    """I ∩ J by eliminating t from t*I + (1-t)*J."""
    if I.ring != J.ring:
        raise ValueError("ideals live in different rings")
    ring = I.ring
    n = ring.nvars
    if not I.gens or not J.gens:
        return Ideal(ring, [], GREVLEX)
    big = PolyRing(("_t",) + ring.names)
    emb = list(range(1, n + 1))
    t = big.gen(0)
    gens = [t * g.to_ring(big, emb) for g in I.groebner()]
    gens += [(big.one() - t) * g.to_ring(big, emb) for g in J.groebner()]
    raw = buchberger([g.terms for g in gens], block_order(1))
    out = []
    for f in raw:
        if all(m[0] == 0 for m in f):
            out.append(Poly(ring, {m[1:]: c for m, c in f.items()}))
    # the t-free part of a reduced block-order basis is a reduced grevlex basis
    out.sort(key=lambda g: GREVLEX.key(leading_monomial(g.terms, GREVLEX)))
    return Ideal(ring, out, GREVLEX, gb=out)


def ideal_intersect_many(ideals: Sequence[Ideal]) -> Ideal:
    """Balanced pairwise intersection of several ideals."""
    ideals = list(ideals)
    if not ideals:
        raise ValueError("empty intersection")
    while len(ideals) > 1:
        nxt = []
        for k in range(0, len(ideals) - 1, 2):
            nxt.append(ideal_intersect(ideals[k], ideals[k + 1]))
        if len(ideals) % 2:
            nxt.append(ideals[-1])
        ideals = nxt
    return ideals[0]
