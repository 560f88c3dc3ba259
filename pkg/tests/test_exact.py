"""Exact layer: scalars, polynomials, Groebner bases, Hilbert series, modules, invariants."""

import pytest
from hypothesis import given, settings, strategies as st

from weylkit.exact.groebner import Ideal, ideal_intersect, ideal_intersect_many
from weylkit.exact.hilbert import HilbertSeries, quotient_dim, quotient_hilbert
from weylkit.exact.invariants import (NotPseudoReflectionGroup, coinvariant_ideal,
                                      fundamental_invariants, group_closure)
from weylkit.exact.linalg import det, inverse, matmul, nullspace, rank, solve
from weylkit.exact.modules import ModulePresentation, free_resolution, syzygies
from weylkit.exact.parse import ParseError, parse_point, parse_poly, parse_scalar
from weylkit.exact.polynomial import PolyRing
from weylkit.exact.scalars import ONE, QQ, ZERO, Cyclotomic, cyclotomic_polynomial, format_scalar, zeta

R3 = PolyRing(["x1", "x2", "x3"])
R2 = PolyRing(["x1", "x2"])


def monic_set(polys):
    out = set()
    for p in polys:
        lead = max(p.terms, key=lambda e: (sum(e), tuple(-a for a in reversed(e))))
        out.add(str(p.scale(ONE / p.terms[lead])))
    return out


# --- scalars ----------------------------------------------------------------------

def test_cyclotomic_basics():
    z = zeta(3)
    assert z ** 3 == 1
    assert 1 + z + z * z == 0
    assert z.inverse() == z * z
    assert (z - 1) * (z - 1).inverse() == 1
    assert cyclotomic_polynomial(6) == (1, -1, 1)


def test_cyclotomic_collapses_to_rationals():
    z = zeta(4)
    assert z * z == -1
    assert isinstance(z * z, type(QQ(1)))


@given(st.lists(st.integers(-5, 5), min_size=2, max_size=2), st.lists(st.integers(-5, 5), min_size=2, max_size=2))
def test_cyclotomic_field_axioms(a, b):
    x = Cyclotomic.make(3, [QQ(c) for c in a])
    y = Cyclotomic.make(3, [QQ(c) for c in b])
    assert x * y == y * x
    assert (x + y) * y == x * y + y * y
    if y != 0:
        assert (x / y) * y == x


def test_scalar_format_roundtrip():
    for c in [QQ(1, 2), QQ(-3), zeta(3), QQ(1, 2) + zeta(3) * 2, zeta(3, 2)]:
        assert parse_scalar(format_scalar(c)) == c


# --- polynomials and parsing -----------------------------------------------------

def test_parse_and_print_roundtrip():
    for text in ["x1^2*x2 - 1/2*x3", "x1 + x2 + x3", "3", "-x2^5"]:
        p = parse_poly(text, R3)
        assert parse_poly(str(p), R3) == p


def test_parse_errors():
    with pytest.raises(ParseError):
        parse_poly("x1 + + ", R3)
    with pytest.raises(ParseError):
        parse_poly("x9", R3)
    assert parse_point("1/2, -1/3") == [QQ(1, 2), QQ(-1, 3)]


def test_exact_division():
    x, y = R2.gens()
    f = (x + y) ** 3 * (x - 2 * y)
    assert f.exact_div(x - 2 * y) == (x + y) ** 3
    with pytest.raises(ArithmeticError):
        f.exact_div(x + 3 * y)


polys = st.dictionaries(st.tuples(st.integers(0, 3), st.integers(0, 3)), st.integers(-4, 4), max_size=5)


@given(polys, polys, polys)
def test_ring_axioms(a, b, c):
    f, g, h = (R2.from_dict({e: QQ(v) for e, v in d.items()}) for d in (a, b, c))
    assert (f + g) * h == f * h + g * h
    assert (f * g) * h == f * (g * h)
    assert f - f == R2.zero()


# --- Groebner bases: frozen sympy grevlex oracles ------------------------------------

FROZEN_GB = [
    (["x1^2*x2 - x3", "x1*x2^2 - x1", "x2^3 - x3^2"],
     ["x1*x2**2 - x1", "x2**3 - x3**2", "x2**2*x3 - x3", "-x1*x2 + x1*x3**2",
      "-x2*x3 + x3**3", "x1**2 - x2*x3"]),
    (["x1^2 + x2^2 - 1", "x1*x2 - 2"],
     ["2*x1 + x2**3 - x2", "x1**2 + x2**2 - 1", "x1*x2 - 2"]),
    (["x1^3 - 2*x1*x2", "x1^2*x2 - 2*x2^2 + x1"],
     ["x1**2", "x1*x2", "-x1 + 2*x2**2"]),
]


@pytest.mark.parametrize("gens,expected", FROZEN_GB)
def test_groebner_matches_frozen_oracle(gens, expected):
    I = Ideal(R3, [parse_poly(g, R3) for g in gens])
    mine = monic_set(I.groebner())
    theirs = monic_set([parse_poly(e.replace("**", "^"), R3) for e in expected])
    assert mine == theirs


def test_groebner_live_sympy():
    sp = pytest.importorskip("sympy")
    a, b, c = sp.symbols("x1 x2 x3")
    gens = [a**2 * b - c + a, b**2 - a * c, a * b * c - 1]
    G = sp.groebner(gens, a, b, c, order="grevlex")
    theirs = monic_set([parse_poly(str(e).replace("**", "^"), R3) for e in G.exprs])
    mine = monic_set(Ideal(R3, [parse_poly(str(e).replace("**", "^"), R3) for e in gens]).groebner())
    assert mine == theirs


@given(st.lists(polys, min_size=1, max_size=3))
@settings(max_examples=40, deadline=None)
def test_generators_reduce_to_zero(gs):
    gens = [R2.from_dict({e: QQ(v) for e, v in d.items()}) for d in gs]
    I = Ideal(R2, gens)
    for g in gens:
        assert I.contains(g)
    for g in gens:
        nf = I.normal_form(g * R2.gen(0) + R2.one())
        assert I.normal_form(nf) == nf


def test_intersection():
    x, y = R2.gens()
    I = ideal_intersect(Ideal(R2, [y - x]), Ideal(R2, [y + x - 2]))
    assert monic_set(I.groebner()) == monic_set([x * x - y * y - 2 * x + 2 * y])
    J = ideal_intersect_many([Ideal(R2, [x]), Ideal(R2, [y]), Ideal(R2, [x - y])])
    assert J.contains(x * y * (x - y))
    assert not J.contains(x * y)


# --- Hilbert series ------------------------------------------------------------------

def test_hilbert_series():
    x, y, z = R3.gens()
    hs = quotient_hilbert(Ideal(R3, [x * y, z ** 2]))
    # k[x,y,z]/(xy, z^2): (1 - t^2)(1 - t^2) / (1-t)^3 = (1+t)^2/(1-t)
    assert hs == HilbertSeries.make([1, 2, 1], 1)
    assert hs.coefficients(4) == [1, 3, 4, 4, 4]
    assert quotient_dim(Ideal(R3, [x ** 2, y ** 2, z ** 2])) == 8
    assert quotient_dim(Ideal(R3, [x])) == "infinite"


# --- modules -------------------------------------------------------------------------

def test_koszul_resolution():
    x, y = R2.gens()
    M = ModulePresentation(R2, [0], [[x], [y]])
    res = free_resolution(M)
    assert res.ranks() == [1, 2, 1]
    assert res.degrees == [[0], [1, 1], [2]]
    assert res.complete


def test_twisted_cubic_syzygies():
    a, b, c = R3.gens()
    # 2x2 minors of [[x1, x2], [x2, x3]]
    M = ModulePresentation(R3, [0], [[a * c - b * b], [a * b], [b * c]])
    S = syzygies(M)
    for col in S.relations:
        total = sum((p * rel[0] for p, rel in zip(col, M.relations)), R3.zero())
        assert total == R3.zero()


def test_truncated_resolution_flagged():
    x, y = R2.gens()
    res = free_resolution(ModulePresentation(R2, [0], [[x], [y]]), max_steps=1)
    assert not res.complete


# --- linear algebra ------------------------------------------------------------------

def test_linalg():
    A = [[QQ(2), QQ(1)], [QQ(1), QQ(3)]]
    assert matmul(A, inverse(A)) == [[1, 0], [0, 1]]
    assert det(A) == 5
    assert rank([[1, 2], [2, 4]]) == 1
    assert nullspace([[QQ(1), QQ(2)], [QQ(2), QQ(4)]], 2) == [[-2, 1]]
    assert solve(A, [QQ(3), QQ(4)]) == [1, 1]


# --- invariants ----------------------------------------------------------------------

def _weyl(label):
    from weylkit.coxeter import build_root_system
    rs = build_root_system(label)
    return rs, [w.coroot_action() for w in rs.elements]


@pytest.mark.parametrize("label,degrees", [("A1", [2]), ("A2", [2, 3]), ("B2", [2, 4]), ("G2", [2, 6])])
def test_invariant_degrees(label, degrees):
    rs, group = _weyl(label)
    ring = PolyRing([f"x{i + 1}" for i in range(rs.rank)])
    inv = fundamental_invariants(group, ring)
    assert sorted(f.degree() for f in inv) == degrees
    assert quotient_dim(coinvariant_ideal(group, ring)) == rs.order


def test_cyclic_invariants():
    ring = PolyRing(["x1"])
    group = group_closure([[[zeta(3)]]])
    assert len(group) == 3
    inv = fundamental_invariants(group, ring)
    assert [str(f) for f in inv] == ["x1^3"]


def test_non_reflection_group_rejected():
    ring = PolyRing(["x1", "x2"])
    group = group_closure([[[-ONE, ZERO], [ZERO, -ONE]]])
    with pytest.raises(NotPseudoReflectionGroup):
        fundamental_invariants(group, ring)
