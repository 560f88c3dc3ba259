"""Descent criteria for equivariant modules: counit, reflections, pointwise fibers."""

import pytest
from hypothesis import given, settings, strategies as st

from weylkit.coxeter import build_root_system
from weylkit.descent.action import ActionError, EquivariantModule, cyclic_action, strata, weyl_group_action
from weylkit.descent.corpus import group, random_module
from weylkit.descent.criteria import (TOR1_TWIST_EXPONENT, CriteriaDisagreement, affine_orbit_descent,
                                      descend, descend_counit, descend_pointwise, descend_reflections,
                                      nonzero_fiber_witness)
from weylkit.descent.fibers import derived_fiber, module_resolution, tor_coinvariants
from weylkit.exact.modules import ModulePresentation
from weylkit.exact.scalars import ONE, QQ, ZERO, zeta


def make(G, degrees, action, relations=()):
    ring = G.ring
    rels = [[ring.parse(p) if isinstance(p, str) else p for p in col] for col in relations]
    return EquivariantModule(ModulePresentation(ring, list(degrees), rels), G, action)


def verdicts(EM):
    return (descend_counit(EM).verdict, descend_reflections(EM).verdict,
            descend_pointwise(EM).verdict)


@pytest.fixture(scope="module")
def A1():
    return group("A1")


@pytest.fixture(scope="module")
def A2():
    return group("A2")


@pytest.fixture(scope="module")
def Z3():
    return group("Z3")


# --- hand examples -------------------------------------------------------------

def test_a1_examples(A1):
    triv, sign = [[[ONE]]], [[[-ONE]]]
    assert verdicts(make(A1, [0], triv)) == ("descends",) * 3
    assert verdicts(make(A1, [0], sign)) == ("fails",) * 3
    assert verdicts(make(A1, [0], triv, [["x1^2"]])) == ("descends",) * 3
    # the residue field at the origin: Tor_1 carries the sign character
    assert verdicts(make(A1, [0], triv, [["x1"]])) == ("fails",) * 3
    # regular representation k[H] tensor Sym
    reg = [[[ZERO, ONE], [ONE, ZERO]]]
    assert verdicts(make(A1, [0, 0], reg)) == ("fails",) * 3


def test_z3_characters(Z3):
    out = [descend(make(Z3, [0], [[[zeta(3, j)]]])).verdict for j in range(3)]
    assert out == ["descends", "fails", "fails"]
    assert descend(make(Z3, [0], [[[ONE]]], [["x1^3"]])).verdict == "descends"
    assert descend(make(Z3, [0], [[[ONE]]], [["x1"]])).verdict == "fails"


def test_a2_determinant_twist_fails_everywhere(A2):
    sign = [[[-ONE]], [[-ONE]]]
    EM = make(A2, [0], sign)
    rep = descend_reflections(EM)
    assert all(d["verdict"] == "fails" for d in rep.details["checked"])
    assert len(rep.details["checked"]) == 3
    assert descend(EM).verdict == "fails"


def test_bad_action_rejected(A2):
    # s1 -> -1, s2 -> 1 breaks the braid relation (s1 s2)^3 = 1 for a character
    with pytest.raises(ActionError):
        make(A2, [0], [[[-ONE]], [[ONE]]])


def test_coxeter_simple_mode_needs_presentation(Z3):
    with pytest.raises(ValueError):
        descend(make(Z3, [0], [[[ONE]]]), mode="coxeter-simple")


# --- calibration of the Tor_1 twist --------------------------------------------------

def test_twist_exponent_is_pinned_by_a1(A1):
    EM = make(A1, [0], [[[ONE]]], [["x1"]])
    assert TOR1_TWIST_EXPONENT == 1
    assert descend_counit(EM).verdict == "fails"
    assert descend_reflections(EM, twist=1).verdict == "fails"
    # without the twist the reflection check would wrongly accept k[x]/(x)
    assert descend_reflections(EM, twist=0).verdict == "descends"


# --- strata -----------------------------------------------------------------------

def test_strata_counts(A1, A2):
    s1 = strata(A1)
    assert sorted(s.dim for s in s1) == [0, 1]
    s2 = strata(A2)
    assert sorted(s.dim for s in s2) == [0, 1, 1, 1, 2]
    assert len({s.orbit for s in s2}) == 3
    for s in s1 + s2:
        assert s.stabilizer == s.brute_stabilizer
    origin = next(s for s in s2 if s.dim == 0)
    assert len(origin.stabilizer) == 6


def test_strata_cyclic(Z3):
    ss = strata(Z3)
    assert sorted(len(s.stabilizer) for s in ss) == [1, 3]


# --- derived fibers ----------------------------------------------------------------

def test_euler_characteristic(A2):
    for i in range(12):
        EM = random_module("A2", 3, i)
        res = module_resolution(EM)
        chi = sum((-1) ** k * r for k, r in enumerate(res.ranks()))
        for s in strata(A2):
            fib = derived_fiber(EM, s.witness, res=res)
            assert sum((-1) ** k * d for k, d in enumerate(fib.dims)) == chi


def test_fiber_away_from_support_is_zero(A1):
    EM = make(A1, [0], [[[ONE]]], [["x1"]])
    assert derived_fiber(EM, [QQ(1)]).is_zero()
    fib = derived_fiber(EM, [QQ(0)])
    assert fib.dims == [1, 1]
    assert fib.trivial_in(0) and not fib.trivial_in(1)


# --- Tor over the coinvariant algebra -------------------------------------------------

def test_residue_field_over_coinvariants(A1):
    EM = make(A1, [0], [[[ONE]]], [["x1"]])
    full = tor_coinvariants(EM, truncation=3)
    heart = tor_coinvariants(EM, heart_only=True)
    assert full.dims == [1, 1, 1, 1]
    assert full.trivial_in(0) and not full.trivial_in(1)
    assert full.verdict == "fails" and full.first_nontrivial == 1
    assert heart.verdict == "descends"


def test_coinvariant_algebra_itself(A1):
    EM = make(A1, [0], [[[ONE]]], [["x1^2"]])
    t = tor_coinvariants(EM)
    assert t.dims[0] == 1 and t.trivial_in(0)
    assert t.verdict == "descends" and t.invariants_ok


def test_tor_parity_of_residue_field(A1):
    # Tor_i(k, k) over k[x]/x^2 is one-dimensional in degree i with character sign^i
    EM = make(A1, [0], [[[ONE]]], [["x1"]])
    t = tor_coinvariants(EM, truncation=4)
    for i, d in enumerate(t.dims):
        assert d == 1
        assert t.degrees[i] == [i]
        assert t.trivial_in(i) == (i % 2 == 0)


# --- randomized agreement ---------------------------------------------------------------

@pytest.mark.parametrize("name", ["A1", "Z3", "A2"])
def test_corpus_unanimity_small(name):
    for i in range(12):
        EM = random_module(name, 7, i)
        v = descend(EM, strict=True)
        if name != "Z3":
            assert descend(EM, mode="coxeter-simple").verdict == v.verdict


@given(st.integers(0, 10_000))
@settings(max_examples=10, deadline=None)
def test_random_a1_modules_agree(seed):
    EM = random_module("A1", seed, 0)
    assert len(set(descend(EM, strict=False).agreement.values())) == 1


@pytest.mark.parametrize("name", ["A1", "Z3"])
def test_tor_coinvariants_matches_counit(name):
    for i in range(10):
        EM = random_module(name, 11, i)
        t = tor_coinvariants(EM, truncation=2)
        c = descend_counit(EM)
        if c.verdict == "descends":
            assert t.first_nontrivial is None
            assert t.invariants_ok in (True, None)
        elif t.verdict == "fails":
            assert c.verdict == "fails"


def test_nonzero_fiber_principle(A2):
    for i in range(10):
        EM = random_module("A2", 5, i)
        if not EM.is_zero():
            assert nonzero_fiber_witness(EM) is not None
    zero = make(A2, [0], [[[ONE]], [[ONE]]], [["1"]])
    assert zero.is_zero()
    assert nonzero_fiber_witness(zero) is None


def test_disagreement_is_reported(monkeypatch, A1):
    import weylkit.descent.criteria as crit
    EM = make(A1, [0], [[[ONE]]], [["x1"]])
    monkeypatch.setattr(crit, "TOR1_TWIST_EXPONENT", 0)
    with pytest.raises(CriteriaDisagreement):
        crit.descend(EM)
    assert crit.descend(EM, strict=False).verdict == "disagree"


# --- affine orbit modules ---------------------------------------------------------------

@pytest.mark.parametrize("x,lattice,rep,expected", [
    ("1", "root", "trivial", "descends"),
    ("1", "root", "sign", "fails"),
    ("1/2", "root", "sign", "descends"),
    ("1/2", "weight", "trivial", "descends"),
    ("1/2", "weight", "sign", "fails"),
    ("1/3", "weight", "sign", "descends"),
])
def test_sl2_orbit_modules(x, lattice, rep, expected):
    rs = build_root_system("A1")
    v = affine_orbit_descent(rs, [QQ(x)], rep, lattice)
    assert v.verdict == expected


def test_orbit_rep_must_respect_relations():
    rs = build_root_system("A1")
    with pytest.raises(ValueError):
        affine_orbit_descent(rs, [QQ(1)], {"s1": [[QQ(2)]]})
