"""Monomial orders.

Each order exposes ``key`` (larger key means larger monomial) and ``neg``
(a key whose ascending order is descending monomial order, for heaps).
Module monomials are tuples ``(component, *exponents)``.
"""

from __future__ import annotations


def grevlex_key(e):
    return (sum(e), tuple(-a for a in reversed(e)))


def _grevlex_neg(e):
    return (-sum(e), tuple(reversed(e)))


class MonomialOrder:
    def __init__(self, name, key, neg, module=False):
        self.name = name
        self.key = key
        self.neg = neg
        self.module = module

    def __repr__(self):
        return f"MonomialOrder({self.name})"


GREVLEX = MonomialOrder("grevlex", grevlex_key, _grevlex_neg)
LEX = MonomialOrder("lex", lambda e: tuple(e), lambda e: tuple(-a for a in e))


def block_order(split: int) -> MonomialOrder:
    """Elimination order: grevlex on e[:split] first, ties broken by grevlex on the rest."""
    def key(e):
        return grevlex_key(e[:split]) + grevlex_key(e[split:])

    def neg(e):
        return _grevlex_neg(e[:split]) + _grevlex_neg(e[split:])
    return MonomialOrder(f"block{split}", key, neg)


def pot_order(weights=None) -> MonomialOrder:
    """Position over term; lower component index is larger.

    ``weights`` (per component degree shifts) are ignored by the order but
    kept for documentation of the graded structure.
    """
    def key(m):
        return (-m[0],) + grevlex_key(m[1:])

    def neg(m):
        return (m[0],) + _grevlex_neg(m[1:])
    return MonomialOrder("pot", key, neg, module=True)


def top_order(weights=None) -> MonomialOrder:
    """Term over position, graded by exponent degree plus component shift."""
    w = list(weights) if weights is not None else None

    def shift(c):
        return w[c] if w is not None else 0

    def key(m):
        e = m[1:]
        return (sum(e) + shift(m[0]), tuple(-a for a in reversed(e)), -m[0])

    def neg(m):
        e = m[1:]
        return (-(sum(e) + shift(m[0])), tuple(reversed(e)), m[0])
    return MonomialOrder("top", key, neg, module=True)


def get_order(order) -> MonomialOrder:
    if isinstance(order, MonomialOrder):
        return order
    if order in (None, "grevlex"):
        return GREVLEX
    if order == "lex":
        return LEX
    raise ValueError(f"unknown monomial order {order!r}")
