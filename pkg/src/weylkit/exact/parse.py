"""Text grammar for polynomials and scalars.

Terms look like ``c*x1^a*y2^b`` joined by ``+``/``-``.  A coefficient is an
integer, a fraction ``p/q``, a power ``zeta3^k`` or a parenthesised sum of
such things, for instance ``(1/2+zeta3)``.
"""

from __future__ import annotations

import re

from .polynomial import Poly, PolyRing
from .scalars import ONE, Cyclotomic, qq, zeta

_TOKEN = re.compile(r"\s*(?:(\d+/\d+|\d+)|(zeta\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()]))")


class ParseError(ValueError):
    pass


def _tokens(text: str):
    pos = 0
    out = []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character at {pos}: {text[pos:pos + 10]!r}")
        num, z, name, op = m.groups()
        if num is not None:
            out.append(("num", num))
        elif z is not None:
            out.append(("zeta", int(z[4:])))
        elif name is not None:
            out.append(("name", name))
        else:
            out.append(("op", "^" if op == "**" else op))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    return out


class _Parser:
    """Recursive descent over sums of products of powers of atoms."""

    def __init__(self, tokens, ring: PolyRing | None):
        self.toks = tokens
        self.i = 0
        self.ring = ring

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self):
        t = self.peek()
        self.i += 1
        return t

    def expr(self):
        sign = 1
        kind, val = self.peek()
        if kind == "op" and val in "+-":
            self.take()
            sign = -1 if val == "-" else 1
        acc = self.term()
        if sign < 0:
            acc = -acc
        while True:
            kind, val = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                t = self.term()
                acc = acc + t if val == "+" else acc - t
            else:
                return acc

    def term(self):
        acc = self.power()
        while True:
            kind, val = self.peek()
            if kind == "op" and val in "*/":
                self.take()
                rhs = self.power()
                if val == "*":
                    acc = acc * rhs if isinstance(acc, Poly) or not isinstance(rhs, Poly) else rhs * acc
                else:
                    if isinstance(rhs, Poly):
                        if not rhs.is_constant():
                            raise ParseError("division by a non-constant")
                        rhs = rhs.constant_term()
                    acc = acc / rhs
            else:
                return acc

    def power(self):
        base = self.atom()
        kind, val = self.peek()
        if kind == "op" and val == "^":
            self.take()
            k, v = self.take()
            if k != "num" or "/" in v:
                raise ParseError("exponent must be a nonnegative integer")
            return base ** int(v)
        return base

    def atom(self):
        kind, val = self.take()
        if kind == "num":
            return qq(val)
        if kind == "zeta":
            return zeta(val)
        if kind == "name":
            if self.ring is None or val not in self.ring.index:
                raise ParseError(f"unknown variable {val!r}")
            return self.ring.gen(val)
        if kind == "op" and val == "(":
            e = self.expr()
            k, v = self.take()
            if v != ")":
                raise ParseError("missing ')'")
            return e
        if kind == "op" and val == "-":
            return -self.atom()
        raise ParseError(f"unexpected token {val!r}")


def parse_poly(text: str, ring: PolyRing) -> Poly:
    p = _Parser(_tokens(text), ring)
    out = p.expr()
    if p.i != len(p.toks):
        raise ParseError(f"trailing input in {text!r}")
    if not isinstance(out, Poly):
        out = ring.const(out)
    return out


def parse_scalar(text: str):
    p = _Parser(_tokens(text), None)
    out = p.expr()
    if p.i != len(p.toks):
        raise ParseError(f"trailing input in {text!r}")
    return out


def parse_point(text: str) -> list:
    """Comma separated scalars, e.g. ``"1/2, 1/3"``."""
    return [parse_scalar(t) for t in text.split(",") if t.strip()]
