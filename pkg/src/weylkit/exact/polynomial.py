"""Sparse multivariate polynomials over Q or Q(zeta_m).

A polynomial is a dict from exponent tuples to nonzero coefficients, wrapped
in :class:`Poly` together with the :class:`PolyRing` naming its variables.
"""

from __future__ import annotations

from itertools import combinations_with_replacement
from typing import Iterable, Sequence

from .scalars import ONE, ZERO, Cyclotomic, format_scalar, qq


def _coerce_scalar(c):
    if isinstance(c, Cyclotomic):
        return c
    return qq(c)


class PolyRing:
    """Polynomial ring with named variables, optionally split into blocks.

    ``blocks`` maps a block tag ("x", "y", ...) to the variable indices it
    owns; a single-block ring has one tag covering everything.
    """

    def __init__(self, names: Sequence[str], blocks: dict | None = None):
        self.names = tuple(names)
        self.nvars = len(self.names)
        self.index = {n: i for i, n in enumerate(self.names)}
        if blocks is None:
            blocks = {"all": tuple(range(self.nvars))}
        self.blocks = {k: tuple(v) for k, v in blocks.items()}

    @classmethod
    def block_ring(cls, n: int, tags: Sequence[str] = ("x", "y")):
        names, blocks = [], {}
        for t in tags:
            blocks[t] = tuple(range(len(names), len(names) + n))
            names += [f"{t}{i + 1}" for i in range(n)]
        return cls(names, blocks)

    def __eq__(self, other):
        return isinstance(other, PolyRing) and self.names == other.names

    def __hash__(self):
        return hash(self.names)

    def __repr__(self):
        return f"PolyRing({list(self.names)})"

    def zero(self) -> "Poly":
        return Poly(self, {})

    def one(self) -> "Poly":
        return self.const(ONE)

    def const(self, c) -> "Poly":
        c = _coerce_scalar(c)
        return Poly(self, {(0,) * self.nvars: c} if c != 0 else {})

    def gen(self, i) -> "Poly":
        if isinstance(i, str):
            i = self.index[i]
        e = [0] * self.nvars
        e[i] = 1
        return Poly(self, {tuple(e): ONE})

    def gens(self) -> list:
        return [self.gen(i) for i in range(self.nvars)]

    def block_gens(self, tag: str) -> list:
        return [self.gen(i) for i in self.blocks[tag]]

    def monomial(self, exp) -> "Poly":
        return Poly(self, {tuple(exp): ONE})

    def linear_form(self, coeffs, tag: str | None = None, const=0) -> "Poly":
        """sum c_i v_i over the variables of ``tag`` (all variables if None)."""
        idx = self.blocks[tag] if tag else range(self.nvars)
        out = {}
        for c, i in zip(coeffs, idx):
            c = _coerce_scalar(c)
            if c != 0:
                e = [0] * self.nvars
                e[i] = 1
                out[tuple(e)] = c
        if const != 0:
            out[(0,) * self.nvars] = _coerce_scalar(const)
        return Poly(self, out)

    def from_dict(self, terms: dict) -> "Poly":
        return Poly(self, {tuple(k): _coerce_scalar(v) for k, v in terms.items() if v != 0})

    def parse(self, text: str) -> "Poly":
        from .parse import parse_poly
        return parse_poly(text, self)


class Poly:
    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolyRing, terms: dict):
        self.ring = ring
        self.terms = terms

    # basic structure ----------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def copy(self):
        return Poly(self.ring, dict(self.terms))

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, tag: str) -> int:
        idx = self.ring.blocks[tag]
        return max((sum(e[i] for i in idx) for e in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def homogeneous_part(self, d: int) -> "Poly":
        return Poly(self.ring, {e: c for e, c in self.terms.items() if sum(e) == d})

    def coefficient(self, exp):
        return self.terms.get(tuple(exp), ZERO)

    def constant_term(self):
        return self.terms.get((0,) * self.ring.nvars, ZERO)

    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e in self.terms)

    # arithmetic -----------------------------------------------------------
    def _lift(self, other):
        if isinstance(other, Poly):
            return other
        return self.ring.const(other)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, ZERO) + c
            if v != 0:
                out[e] = v
            else:
                out.pop(e, None)
        return Poly(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, ZERO) - c
            if v != 0:
                out[e] = v
            else:
                out.pop(e, None)
        return Poly(self.ring, out)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "Poly":
        if c == 0:
            return Poly(self.ring, {})
        return Poly(self.ring, {e: v * c for e, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return self.scale(_coerce_scalar(other))
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = out.get(e, ZERO) + c1 * c2
                if v != 0:
                    out[e] = v
                else:
                    out.pop(e, None)
        return Poly(self.ring, out)

    def __rmul__(self, other):
        return self.scale(_coerce_scalar(other))

    def __truediv__(self, other):
        if isinstance(other, Poly):
            return self.exact_div(other)
        return self.scale(ONE / _coerce_scalar(other))

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        out, base = self.ring.one(), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def mul_monomial(self, exp, c=ONE) -> "Poly":
        return Poly(self.ring, {tuple(a + b for a, b in zip(e, exp)): v * c
                                for e, v in self.terms.items()})

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.terms == other.terms
        try:
            return self.terms == self.ring.const(other).terms
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # division -------------------------------------------------------------
    def exact_div(self, g: "Poly") -> "Poly":
        """Quotient f/g, raising ArithmeticError if g does not divide f."""
        q, r = self.divmod(g)
        if r:
            raise ArithmeticError("polynomial division leaves a remainder")
        return q

    def divmod(self, g: "Poly"):
        """Division by one polynomial using grevlex leading terms."""
        from .orders import grevlex_key
        if not g:
            raise ZeroDivisionError("division by zero polynomial")
        lg = max(g.terms, key=grevlex_key)
        cg = g.terms[lg]
        rem = dict(self.terms)
        quo: dict = {}
        out_rem: dict = {}
        while rem:
            lt = max(rem, key=grevlex_key)
            c = rem[lt]
            if all(a >= b for a, b in zip(lt, lg)):
                m = tuple(a - b for a, b in zip(lt, lg))
                f = c / cg
                quo[m] = quo.get(m, ZERO) + f
                for e, v in g.terms.items():
                    ee = tuple(a + b for a, b in zip(e, m))
                    nv = rem.get(ee, ZERO) - f * v
                    if nv != 0:
                        rem[ee] = nv
                    else:
                        rem.pop(ee, None)
            else:
                out_rem[lt] = c
                del rem[lt]
        return (Poly(self.ring, {e: c for e, c in quo.items() if c != 0}),
                Poly(self.ring, out_rem))

    # substitution ---------------------------------------------------------
    def subs(self, values: Sequence, ring: PolyRing | None = None) -> "Poly":
        """Compose: replace variable i by ``values[i]`` (Poly or scalar)."""
        target = ring
        if target is None:
            target = next((v.ring for v in values if isinstance(v, Poly)), None)
        if target is None:
            raise ValueError("subs with scalar values needs an explicit target ring")
        vals = [v if isinstance(v, Poly) else target.const(v) for v in values]
        powers: list = [dict() for _ in vals]

        def pw(i, k):
            cache = powers[i]
            if k not in cache:
                if k == 0:
                    cache[k] = target.one()
                elif k == 1:
                    cache[k] = vals[i]
                else:
                    cache[k] = pw(i, k // 2) * pw(i, k - k // 2)
            return cache[k]

        acc: dict = {}
        for e, c in self.terms.items():
            term = None
            for i, k in enumerate(e):
                if k:
                    p = pw(i, k)
                    term = p if term is None else term * p
            if term is None:
                term = target.one()
            for ee, v in term.terms.items():
                nv = acc.get(ee, ZERO) + c * v
                acc[ee] = nv
        return Poly(target, {e: v for e, v in acc.items() if v != 0})

    def evaluate(self, point: Sequence):
        total = ZERO
        for e, c in self.terms.items():
            t = c
            for x, k in zip(point, e):
                if k:
                    t = t * (x ** k)
            total = total + t
        return total

    def partial_subs(self, assignment: dict) -> "Poly":
        """Substitute scalars for some variables (index -> value), staying in the ring."""
        out: dict = {}
        for e, c in self.terms.items():
            ne = list(e)
            v = c
            for i, x in assignment.items():
                if e[i]:
                    v = v * (x ** e[i])
                    ne[i] = 0
            if v != 0:
                ne = tuple(ne)
                s = out.get(ne, ZERO) + v
                if s != 0:
                    out[ne] = s
                else:
                    out.pop(ne, None)
        return Poly(self.ring, out)

    def to_ring(self, ring: PolyRing, index_map: Sequence[int]) -> "Poly":
        """Re-embed into ``ring`` sending variable i to variable index_map[i]."""
        out = {}
        for e, c in self.terms.items():
            ne = [0] * ring.nvars
            for i, k in enumerate(e):
                if k:
                    ne[index_map[i]] += k
            out[tuple(ne)] = c
        return Poly(ring, out)

    def variables_used(self) -> set:
        return {i for e in self.terms for i, k in enumerate(e) if k}

    # printing -------------------------------------------------------------
    def sorted_terms(self):
        from .orders import grevlex_key
        return sorted(self.terms.items(), key=lambda t: grevlex_key(t[0]), reverse=True)

    def __str__(self):
        if not self.terms:
            return "0"
        pieces = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                (n if k == 1 else f"{n}^{k}") for n, k in zip(self.ring.names, e) if k)
            cs = format_scalar(c)
            if not mono:
                pieces.append(cs)
            elif c == 1:
                pieces.append(mono)
            elif c == -1:
                pieces.append("-" + mono)
            else:
                pieces.append(f"{cs}*{mono}")
        s = pieces[0]
        for p in pieces[1:]:
            s += " - " + p[1:] if p.startswith("-") else " + " + p
        return s

    def __repr__(self):
        return f"Poly({self})"


def monomials_of_degree(n: int, d: int) -> list:
    """All exponent tuples in n variables of total degree d."""
    out = []
    for combo in combinations_with_replacement(range(n), d):
        e = [0] * n
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return out


def monomials_up_to(n: int, d: int) -> list:
    out = []
    for k in range(d + 1):
        out += monomials_of_degree(n, k)
    return out


def linear_transform(f: Poly, matrix, shift=None) -> Poly:
    """Return f(A v + b) where v is the variable vector of f's ring."""
    ring = f.ring
    n = ring.nvars
    vals = []
    for i in range(n):
        row = matrix[i]
        vals.append(ring.linear_form(row, None, shift[i] if shift is not None else 0))
    return f.subs(vals, ring)


def poly_sum(polys: Iterable[Poly], ring: PolyRing) -> Poly:
    acc: dict = {}
    for p in polys:
        for e, c in p.terms.items():
            acc[e] = acc.get(e, ZERO) + c
    return Poly(ring, {e: c for e, c in acc.items() if c != 0})
