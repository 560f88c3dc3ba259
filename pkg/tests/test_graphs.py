"""Graph ideals, unions of graphs, flatness and coarse fibers."""

import pytest

from weylkit.affine import affine_group
from weylkit.coxeter import build_root_system, enumerate_closed_subsets
from weylkit.demazure import construct_F, xy_ring
from weylkit.exact.groebner import Ideal
from weylkit.exact.hilbert import HilbertSeries, quotient_hilbert
from weylkit.exact.scalars import QQ
from weylkit.graphs import (NotClosedError, closed_subset_basis, coarse_fiber, fiber_dimension,
                            flatness_report, graph_ideal, union_ideal, verify_borel_product)


def test_graph_ideals_a1():
    rs = build_root_system("A1")
    ring = xy_ring(rs)
    x, y = ring.gens()
    assert Ideal(ring, [y - x]).groebner() == graph_ideal(rs.identity, ring).groebner()
    assert graph_ideal(rs.w0, ring).contains(y + x)
    G = affine_group("A1~", "weight")
    assert graph_ideal(G.simple_reflection(0), ring).contains(y + x - 2)


def test_union_of_a1_graphs():
    rs = build_root_system("A1")
    b = union_ideal(rs.elements, xy_ring(rs))
    x, y = b.ring.gens()
    assert b.I_S.contains(y * y - x * x)
    assert not b.I_S.contains(y - x)
    assert quotient_hilbert(b.I_S) == HilbertSeries.make([1, 1], 1)
    assert b.quotient_dim() == 2


def test_union_contains_an_invariant_linear_form():
    # p with s(p) = p gives the degree-one element p(y) - p(x) of I_{e} cap I_{s}
    from weylkit.exact.linalg import nullspace
    rs = build_root_system("B2")
    ring = xy_ring(rs)
    s = rs.simple_reflection(1)
    b = union_ideal([rs.identity, s], ring)
    M = [[s.matrix[j][k] - (1 if j == k else 0) for j in range(2)] for k in range(2)]
    (c,) = nullspace(M, 2)
    x1, x2, y1, y2 = ring.gens()
    form = (y1 - x1).scale(c[0]) + (y2 - x2).scale(c[1])
    assert b.I_S.contains(form)
    assert not b.I_S.contains(y1 - x1)


@pytest.mark.parametrize("label,dim", [("A1", 2), ("A2", 6), ("B2", 8), ("G2", 12)])
def test_borel_dimension(label, dim):
    rep = verify_borel_product(build_root_system(label), closed_subsets=False)
    assert rep["dim_J_W"] == dim
    assert rep["series_ok"] and rep["ok"]


@pytest.mark.parametrize("label", ["A2", "B2"])
def test_closed_subset_bases(label):
    rs = build_root_system(label)
    pkg = construct_F(rs)
    for Z in enumerate_closed_subsets(rs):
        if Z:
            rep = closed_subset_basis(rs, Z, pkg)
            assert rep["ok"], rep


def test_inverse_convention_fails_somewhere():
    rs = build_root_system("A2")
    pkg = construct_F(rs)
    results = [closed_subset_basis(rs, Z, pkg, convention="inverse")["ok"]
               for Z in enumerate_closed_subsets(rs) if Z]
    assert not all(results)


def test_schubert_e_s1_s2():
    rs = build_root_system("A2")
    Z = [rs.identity] + rs.simple_reflections
    rep = closed_subset_basis(rs, Z)
    assert rep["dim_J_S"] == 3
    assert sorted(rep["basis"]) == sorted(["s1 s2", "s2 s1", "s1 s2 s1"])


def test_sl2_fibers():
    G = affine_group("A1~", "weight")
    S = [G.identity, G.simple_reflection(0)]
    r1 = fiber_dimension(S, [QQ(1)], G)
    assert r1.total == 2 and [b["length"] for b in r1.blocks] == [2]
    r2 = fiber_dimension(S, [QQ(1, 2)], G)
    assert r2.total == 2 and sorted(b["point"][0] for b in r2.blocks) == ["1/2", "3/2"]
    assert [b["length"] for b in r2.blocks] == [1, 1]
    r0 = fiber_dimension(S, [QQ(0)], G)
    assert r0.total == 2 and sorted(b["point"][0] for b in r0.blocks) == ["0", "2"]
    assert r0.verdict == r1.verdict == r2.verdict == "PASS"


def test_dual_numbers_fiber_ideal():
    G = affine_group("A1~", "weight")
    b = union_ideal([G.identity, G.simple_reflection(0)])
    x, y = b.ring.gens()
    assert b.I_S.contains((y - x) * (y + x - 2))
    # at x = 1 the generator becomes (y - 1)^2
    assert ((y - x) * (y + x - 2)).subs([b.ring.const(QQ(1)), y], b.ring) == (y - 1) ** 2


def test_non_closed_subset_breaks_flatness():
    rs = build_root_system("A2")
    S = [rs.identity, rs.parse_element("s1 s2")]
    rep = fiber_dimension(S, [QQ(0), QQ(0)], require_closed=False)
    assert rep.total == 3 and rep.verdict == "FAIL"
    ok = fiber_dimension([rs.identity, rs.simple_reflection(1)], [QQ(0), QQ(0)], rs)
    assert ok.total == 2 and ok.verdict == "PASS"


def test_refuses_non_closed_subset():
    G = affine_group("A1~")
    with pytest.raises(NotClosedError):
        fiber_dimension([G.identity, G.parse_element("s1 s0")], [QQ(0)], G)


def test_flatness_small():
    G = affine_group("A1~", "weight")
    S = G.lower_interval(G.parse_element("s0 s1 s0"))
    rep = flatness_report(G, S, denoms=(1, 2), generic=5)
    assert rep["verdict"] == "PASS"
    assert rep["fiber_lengths"] == [6]


@pytest.mark.parametrize("x,lattice,cosets,dim", [
    ("1", "weight", 1, 2), ("1/2", "weight", 2, 1), ("1/3", "weight", 2, 1), ("0", "root", 1, 2),
])
def test_coarse_fiber_sl2(x, lattice, cosets, dim):
    cf = coarse_fiber(build_root_system("A1"), [QQ(x)], lattice)
    assert (cf.cosets, cf.coinvariant_dim) == (cosets, dim)
    assert cf.ok()


def test_coarse_fiber_weight_lattice_half():
    cf = coarse_fiber(build_root_system("A1"), [QQ(1, 2)], "weight")
    assert len(cf.W_bracket) == 1
    assert len(cf.extended_stabilizer) == 2


@pytest.mark.parametrize("label", ["A2", "B2"])
def test_coarse_fibers_multiply_to_order(label):
    from weylkit.affine import special_points
    rs = build_root_system(label)
    for p in special_points(rs, (1, 2, 3), box=1):
        cf = coarse_fiber(rs, p)
        assert cf.cosets * cf.coinvariant_dim == rs.order
