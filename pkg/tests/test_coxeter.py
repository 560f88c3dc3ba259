"""Root systems, Weyl groups, Bruhat order and closed subsets."""

import itertools

import pytest
from hypothesis import given, settings, strategies as st

from weylkit.coxeter import (SUPPORTED, UnsupportedType, bruhat_leq, bruhat_leq_oracle,
                             build_root_system, enumerate_closed_subsets, first_closure_violation,
                             is_closed, parse_word, poincare_polynomial, word_to_str)

# (|W|, #positive roots, #closed subsets incl. the empty one, Poincare polynomial)
# counts of closed subsets come from a brute-force scan of all subsets of W
FROZEN = {
    "A1": (2, 1, 3, [1, 1]),
    "A2": (6, 3, 9, [1, 2, 2, 1]),
    "B2": (8, 4, 12, [1, 2, 2, 2, 1]),
    "C2": (8, 4, 12, [1, 2, 2, 2, 1]),
    "G2": (12, 6, 18, [1, 2, 2, 2, 2, 2, 1]),
    "A3": (24, 6, 250, [1, 3, 5, 6, 5, 3, 1]),
}


@pytest.mark.parametrize("label", sorted(FROZEN))
def test_group_data(label):
    rs = build_root_system(label)
    order, npos, nclosed, poin = FROZEN[label]
    assert rs.order == order
    assert len(rs.positive_roots) == npos
    assert poincare_polynomial(rs) == poin
    assert rs.w0.length == npos


@pytest.mark.parametrize("label", ["A1", "A2", "B2", "C2", "G2"])
def test_closed_subset_counts(label):
    rs = build_root_system(label)
    assert len(enumerate_closed_subsets(rs)) == FROZEN[label][2]


def test_closed_subset_count_a3():
    rs = build_root_system("A3")
    assert len(enumerate_closed_subsets(rs)) == 250


def brute_closed_subsets(rs):
    out = 0
    for r in range(rs.order + 1):
        for S in itertools.combinations(rs.elements, r):
            members = set(S)
            if all(bruhat_leq_oracle(rs, u, w) is False or u in members
                   for w in S for u in rs.elements):
                out += 1
    return out


@pytest.mark.parametrize("label", ["A1", "A2", "B2"])
def test_closed_subsets_match_brute_force(label):
    rs = build_root_system(label)
    assert brute_closed_subsets(rs) == len(enumerate_closed_subsets(rs))


def test_unsupported_type():
    with pytest.raises(UnsupportedType):
        build_root_system("E8")
    assert "A2" in SUPPORTED


@pytest.mark.parametrize("label,m", [("A2", 3), ("B2", 4), ("G2", 6)])
def test_braid_relation(label, m):
    rs = build_root_system(label)
    s1, s2 = rs.simple_reflections
    a = rs.identity
    b = rs.identity
    for k in range(m):
        a = a * (s1 if k % 2 == 0 else s2)
        b = b * (s2 if k % 2 == 0 else s1)
    assert a == b == rs.w0
    assert s1 * s1 == rs.identity


@pytest.mark.parametrize("label", ["A2", "B2", "G2", "A3"])
def test_length_matches_inversions(label):
    rs = build_root_system(label)
    for w in rs.elements:
        assert w.length == rs.inversion_length(w)


@pytest.mark.parametrize("label", ["A2", "B2"])
def test_bruhat_matches_subword_oracle(label):
    rs = build_root_system(label)
    for u in rs.elements:
        for w in rs.elements:
            assert bruhat_leq(rs, u, w) == bruhat_leq_oracle(rs, u, w)


def test_bruhat_examples():
    rs = build_root_system("A2")
    e = rs.identity
    s1, s2 = rs.simple_reflections
    s12 = rs.parse_element("s1 s2")
    assert bruhat_leq(rs, e, rs.w0)
    assert bruhat_leq(rs, s2, s12)
    assert not bruhat_leq(rs, s12, rs.parse_element("s2 s1"))
    assert not bruhat_leq(rs, s1, s2)


def test_is_closed_examples():
    rs = build_root_system("A2")
    e = rs.identity
    s1, s2 = rs.simple_reflections
    s12 = rs.parse_element("s1 s2")
    assert is_closed(rs, [e, s1, s2])
    assert is_closed(rs, [e, s1])
    assert not is_closed(rs, [e, s12])
    u, w = first_closure_violation(rs, [e, s1, s12])
    assert u == s2 and w == s12


def test_parse_word_forms():
    assert parse_word("s1 s2") == (1, 2)
    assert parse_word("s1s2s1") == (1, 2, 1)
    assert parse_word("e") == ()
    assert word_to_str((2, 1)) == "s2 s1"


@given(st.lists(st.integers(1, 2), max_size=8))
@settings(max_examples=60, deadline=None)
def test_word_evaluation_is_a_homomorphism(word):
    rs = build_root_system("B2")
    k = len(word) // 2
    g = rs.element_from_word(word)
    assert g == rs.element_from_word(word[:k]) * rs.element_from_word(word[k:])
    assert g.length <= len(word)
    assert (len(word) - g.length) % 2 == 0
