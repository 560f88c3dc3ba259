"""Exact scalar fields: the rationals and cyclotomic fields Q(zeta_m).

Rationals are ``gmpy2.mpq`` values.  Elements of Q(zeta_m) are stored as
residues modulo the m-th cyclotomic polynomial; any result that turns out to
be rational is returned as a plain ``mpq`` so the fast path stays fast.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd

from gmpy2 import mpq

QQ = mpq
ZERO = mpq(0)
ONE = mpq(1)


def qq(value) -> mpq:
    """Coerce an int, Fraction, string ``"p/q"`` or mpq to mpq."""
    if isinstance(value, str):
        return mpq(value.strip())
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    return mpq(value)


# --- dense univariate helpers over Q (lists, low degree first) -------------

def _trim(p):
    while p and p[-1] == 0:
        p.pop()
    return p


def _pmul(a, b):
    if not a or not b:
        return []
    out = [ZERO] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            out[i + j] += ai * bj
    return _trim(out)


def _psub(a, b):
    n = max(len(a), len(b))
    return _trim([(a[i] if i < len(a) else ZERO) - (b[i] if i < len(b) else ZERO)
                  for i in range(n)])


def _pdivmod(a, b):
    a = list(a)
    q = [ZERO] * max(len(a) - len(b) + 1, 1)
    lead = b[-1]
    while len(a) >= len(b) and a:
        c = a[-1] / lead
        shift = len(a) - len(b)
        q[shift] = c
        for i, bi in enumerate(b):
            a[shift + i] -= c * bi
        _trim(a)
    return _trim(q), a


@lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int) -> tuple:
    """Coefficients (low degree first) of the m-th cyclotomic polynomial."""
    if m < 1:
        raise ValueError("cyclotomic order must be positive")
    num = [mpq(-1)] + [ZERO] * (m - 1) + [ONE]
    for d in range(1, m):
        if m % d == 0:
            num, rem = _pdivmod(num, list(cyclotomic_polynomial(d)))
            assert not rem
    return tuple(num)


def euler_phi(m: int) -> int:
    return sum(1 for k in range(1, m + 1) if gcd(k, m) == 1)


class Cyclotomic:
    """An element of Q(zeta_m) in the power basis 1, z, ..., z^(phi(m)-1)."""

    __slots__ = ("m", "coeffs", "_hash")

    def __init__(self, m: int, coeffs):
        self.m = m
        phi = cyclotomic_polynomial(m)
        c = [qq(v) for v in coeffs]
        if len(c) >= len(phi):
            _, c = _pdivmod(c, list(phi))
        c = list(c) + [ZERO] * (len(phi) - 1 - len(c))
        self.coeffs = tuple(c)
        self._hash = None

    @staticmethod
    def make(m: int, coeffs):
        """Build an element, collapsing to mpq when it is rational."""
        z = Cyclotomic(m, coeffs)
        if all(c == 0 for c in z.coeffs[1:]):
            return z.coeffs[0] if z.coeffs else ZERO
        return z

    # arithmetic ------------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, Cyclotomic):
            if other.m != self.m:
                raise ValueError(f"mixing Q(zeta{self.m}) and Q(zeta{other.m})")
            return list(other.coeffs)
        if isinstance(other, (int, mpq, Fraction)):
            return [qq(other)]
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = len(self.coeffs)
        o = o + [ZERO] * (n - len(o))
        return Cyclotomic.make(self.m, [a + b for a, b in zip(self.coeffs, o)])

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic(self.m, [-a for a in self.coeffs])

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = len(self.coeffs)
        o = o + [ZERO] * (n - len(o))
        return Cyclotomic.make(self.m, [a - b for a, b in zip(self.coeffs, o)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Cyclotomic.make(self.m, _pmul(list(self.coeffs), o))

    __rmul__ = __mul__

    def inverse(self):
        # extended Euclid in Q[t] against the cyclotomic polynomial
        r0, r1 = list(cyclotomic_polynomial(self.m)), _trim(list(self.coeffs))
        if not r1:
            raise ZeroDivisionError("inverse of zero in cyclotomic field")
        s0, s1 = [], [ONE]
        while len(r1) > 1:
            q, r = _pdivmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _psub(s0, _pmul(q, s1))
        c = r1[0]
        return Cyclotomic.make(self.m, [v / c for v in s1])

    def __truediv__(self, other):
        if isinstance(other, Cyclotomic):
            return self * other.inverse()
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Cyclotomic.make(self.m, [a / o[0] for a in self.coeffs])

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out, base = ONE, self
        while k:
            if k & 1:
                out = base * out
            base = base * base
            k >>= 1
        return out

    # comparison --------------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, Cyclotomic):
            return self.m == other.m and self.coeffs == other.coeffs
        if isinstance(other, (int, mpq, Fraction)):
            return self.coeffs[0] == other and all(c == 0 for c in self.coeffs[1:])
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            if all(c == 0 for c in self.coeffs[1:]):
                self._hash = hash(self.coeffs[0])
            else:
                self._hash = hash((self.m, self.coeffs))
        return self._hash

    def __bool__(self):
        return any(c != 0 for c in self.coeffs)

    def conjugate(self):
        """Complex conjugation zeta -> zeta^(-1)."""
        out = ZERO
        z_inv = zeta(self.m) ** (self.m - 1)
        for k, c in enumerate(self.coeffs):
            if c != 0:
                out = out + c * (z_inv ** k if k else ONE)
        return out

    def __repr__(self):
        return f"Cyclotomic({self.m}, {[str(c) for c in self.coeffs]})"

    def __str__(self):
        return format_scalar(self)


def zeta(m: int, k: int = 1):
    """The primitive root zeta_m raised to the k-th power."""
    if m <= 2:
        return mpq(-1) ** (k % 2) if m == 2 else ONE
    k %= m
    return Cyclotomic.make(m, [ZERO] * k + [ONE])


def field_order(values) -> int:
    """Return m if any value lives in Q(zeta_m), else 1."""
    for v in values:
        if isinstance(v, Cyclotomic):
            return v.m
    return 1


def format_scalar(c) -> str:
    """Text form used by the polynomial grammar: ``p/q`` or ``(a+b*zeta3)``."""
    if isinstance(c, Cyclotomic):
        parts = []
        for k, v in enumerate(c.coeffs):
            if v == 0:
                continue
            mono = "" if k == 0 else (f"zeta{c.m}" if k == 1 else f"zeta{c.m}^{k}")
            if not mono:
                parts.append(str(v))
            elif v == 1:
                parts.append(mono)
            elif v == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{v}*{mono}")
        s = parts[0]
        for p in parts[1:]:
            s += p if p.startswith("-") else "+" + p
        return "(" + s + ")"
    return str(qq(c))


def is_rational(c) -> bool:
    return not isinstance(c, Cyclotomic)
