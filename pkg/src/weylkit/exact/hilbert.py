"""Hilbert series and standard monomials from leading-term ideals."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .groebner import Ideal


def _pmul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _padd(a, b, sign=1):
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else 0) + sign * (b[i] if i < len(b) else 0) for i in range(n)]
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


def _minimalize(gens):
    gens = sorted(set(gens), key=sum)
    out = []
    for g in gens:
        if not any(all(a <= b for a, b in zip(h, g)) for h in out):
            out.append(g)
    return out


def monomial_numerator(gens: Sequence[tuple], nvars: int) -> list:
    """K(t) with HS(k[x]/M) = K(t)/(1-t)^nvars, for monomial ideal M."""
    gens = _minimalize(gens)
    if not gens:
        return [1]
    if any(sum(g) == 0 for g in gens):
        return [0]
    # all generators are powers of variables: a product formula
    if all(sum(1 for a in g if a) == 1 for g in gens):
        out = [1]
        for g in gens:
            d = sum(g)
            out = _pmul(out, [1] + [0] * (d - 1) + [-1])
        return out
    # pivot on a variable occurring in a non-pure generator
    m = next(g for g in gens if sum(1 for a in g if a) > 1)
    i = next(k for k, a in enumerate(m) if a)
    piv = tuple(1 if k == i else 0 for k in range(nvars))
    # K(M) = K(M + x_i) + t * K(M : x_i)
    plus = gens + [piv]
    colon = [tuple(max(a - (1 if k == i else 0), 0) for k, a in enumerate(g)) for g in gens]
    return _padd(monomial_numerator(plus, nvars), [0] + monomial_numerator(colon, nvars))


@dataclass(frozen=True)
class HilbertSeries:
    """num(t) / (1 - t)^denom, with num given low degree first."""

    numerator: tuple
    denom: int

    @classmethod
    def make(cls, num, denom):
        num = list(num)
        # cancel common factors of (1 - t)
        while denom > 0 and sum(num) == 0 and any(num):
            q = []
            acc = 0
            for c in num[:-1]:
                acc += c
                q.append(acc)
            num = q or [0]
            denom -= 1
        while len(num) > 1 and num[-1] == 0:
            num.pop()
        return cls(tuple(num), denom)

    def coefficients(self, upto: int) -> list:
        """Series coefficients h_0..h_upto."""
        out = [0] * (upto + 1)
        for i, c in enumerate(self.numerator):
            if i > upto or c == 0:
                continue
            for d in range(upto + 1 - i):
                # coefficient of t^d in (1-t)^(-denom)
                out[i + d] += c * _binom(d + self.denom - 1, self.denom - 1) if self.denom else (c if d == 0 else 0)
        return out

    def dimension(self):
        """Total dimension if finite, else the string "infinite"."""
        if self.denom == 0:
            return sum(self.numerator)
        return "infinite"

    def krull_dim(self) -> int:
        return self.denom

    def as_fraction_at(self, t):
        num = sum(Fraction(c) * Fraction(t) ** i for i, c in enumerate(self.numerator))
        return num / (1 - Fraction(t)) ** self.denom

    def __str__(self):
        terms = []
        for i, c in enumerate(self.numerator):
            if c == 0:
                continue
            mono = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
            if not mono:
                terms.append(str(c))
            else:
                terms.append(mono if c == 1 else (f"-{mono}" if c == -1 else f"{c}*{mono}"))
        num = " + ".join(terms).replace("+ -", "- ") or "0"
        if self.denom == 0:
            return num
        d = "(1-t)" if self.denom == 1 else f"(1-t)^{self.denom}"
        return f"({num})/{d}"


def _binom(n, k):
    from math import comb
    return comb(n, k) if n >= 0 and k >= 0 else 0


def quotient_hilbert(I: Ideal) -> HilbertSeries:
    if not I.is_homogeneous():
        raise ValueError("Hilbert series needs a homogeneous ideal")
    lms = I.leading_monomials() if I.gens else []
    return HilbertSeries.make(monomial_numerator(lms, I.ring.nvars), I.ring.nvars)


def module_hilbert(lead_by_component: Sequence[Sequence[tuple]], shifts: Sequence[int],
                   nvars: int) -> HilbertSeries:
    """Hilbert series of F/N from the leading monomials of N in each component."""
    total = [0]
    for lms, s in zip(lead_by_component, shifts):
        k = monomial_numerator(list(lms), nvars)
        total = _padd(total, [0] * s + k)
    return HilbertSeries.make(total, nvars)


def standard_monomials(lms: Sequence[tuple], nvars: int, limit: int | None = None):
    """Exponents not divisible by any of ``lms``; None if there are infinitely many.

    ``limit`` caps the degree explored (then the list is always finite).
    """
    lms = _minimalize(lms)
    if any(sum(m) == 0 for m in lms):
        return []
    if limit is None:
        for i in range(nvars):
            if not any(m[i] > 0 and sum(m) == m[i] for m in lms):
                return None
    seen = set()
    frontier = [(0,) * nvars]
    out = []
    while frontier:
        nxt = []
        for e in frontier:
            if e in seen:
                continue
            seen.add(e)
            if any(all(a <= b for a, b in zip(m, e)) for m in lms):
                continue
            out.append(e)
            if limit is not None and sum(e) >= limit:
                continue
            for i in range(nvars):
                f = list(e)
                f[i] += 1
                nxt.append(tuple(f))
        frontier = nxt
    out.sort(key=lambda e: (sum(e), tuple(-a for a in reversed(e))))
    return out


def quotient_dim(I: Ideal):
    """Dimension of k[x]/I as a vector space, or "infinite"."""
    if not I.gens:
        return "infinite" if I.ring.nvars else 1
    sm = standard_monomials(I.leading_monomials(), I.ring.nvars)
    if sm is None:
        return "infinite"
    return len(sm)


def poincare_from_degrees(degrees: Sequence[int]) -> list:
    """prod (1 + t + ... + t^(d-1)) over the invariant degrees."""
    out = [1]
    for d in degrees:
        out = _pmul(out, [1] * d)
    return out
