import pytest
from hypothesis import given, settings, strategies as st

from hklattice.catalog import parse_blocks
from hklattice.cones import (BIR_FINITE, BIR_INFINITE, UNDETERMINED, chamber_decomposition_rank2,
                             divisibility_rule, in_movable_interior, in_positive_cone,
                             rank2_cone_report, render_svg)
from hklattice.errors import DomainError
from hklattice.lattice import GramLattice, Sublattice
from hklattice.walls import builtin_walls, walls_from_obj

K3 = builtin_walls("K3")


def diag(a, c):
    return GramLattice(((a, 0), (0, c)))


@pytest.mark.parametrize("a,c,verdict", [(2, -2, BIR_FINITE), (4, -6, BIR_FINITE), (2, -6, BIR_INFINITE),
                                         (2, -2032, BIR_INFINITE)])
def test_bir_trio(a, c, verdict):
    rep = rank2_cone_report(diag(a, c), (1, 0), K3)
    assert rep.verdict == verdict


def test_isotropic_reason():
    rep = rank2_cone_report(diag(2, -2), (1, 0), K3)
    assert "isotropic" in rep.explanation
    assert rep.certificate["isotropic_vector"] in ([1, 1], [1, -1], [-1, 1], [-1, -1])
    # (1, 0) sits on the wall of (0, 1); the rays are reported for a nearby class
    assert rep.ample != (1, 0)


def test_wall_class_reason():
    rep = rank2_cone_report(diag(4, -6), (1, 0), K3)
    assert sorted(rep.wall_classes) == [(1, -1), (1, 1)]
    assert all(r.kind == "wall_class" for r in rep.effective_rays)
    assert all(r.kind == "wall_orthogonal" for r in rep.movable_rays)


def test_infinite_certificate():
    rep = rank2_cone_report(diag(2, -6), (1, 0), K3)
    cert = rep.certificate
    assert cert["anisotropy"]["data"]["disc"] == 12
    assert cert["wall_entries"][0]["primitively_represented"] is False
    assert rep.movable_rays == rep.positive_rays


def test_no_walls():
    assert rank2_cone_report(diag(2, -6), (1, 0), None).verdict == UNDETERMINED
    assert rank2_cone_report(diag(2, -2), (1, 0), None).verdict == BIR_FINITE


def test_divisibility_semantics_matter():
    # <2> + <-6> inside U + <-6> via (e + f, delta)
    M = parse_blocks("U + <-6>")
    emb = Sublattice(M, (M.vector((1, 1, 0)), M.vector((0, 0, 1))))
    L = emb.as_lattice()
    rule = divisibility_rule(L, emb)
    assert rule.semantics == "ambient"
    assert rule.div((1, 0)) == 1 and rule.div((0, 1)) == 6
    walls = walls_from_obj([{"square": -6, "div": 6}])
    picard = rank2_cone_report(L, (1, 0), walls)
    ambient = rank2_cone_report(L, (1, 0), walls, embedding=emb)
    assert picard.verdict == BIR_FINITE and ambient.verdict == BIR_FINITE
    walls3 = walls_from_obj([{"square": -6, "div": 3}])
    # (3, 2) has square -6, divisibility 3 in the ambient lattice but 6 in L itself
    assert rule.div((3, 2)) == 3
    assert rank2_cone_report(L, (1, 0), walls3, embedding=emb).verdict == BIR_FINITE
    assert rank2_cone_report(L, (1, 0), walls3).verdict == BIR_INFINITE


def test_positive_cone():
    L = diag(2, -6)
    assert in_positive_cone(L, (2, 1), (1, 0))
    assert not in_positive_cone(L, (-2, 1), (1, 0))
    assert not in_positive_cone(L, (1, 1), (1, 0))


def test_movable_interior():
    L = diag(4, -6)
    dec = in_movable_interior(L, (3, 2), (1, 0), K3)
    assert not dec.value and dec.witness == (1, 1)
    assert dec.certificate.kind == "blocking_wall"
    dec = in_movable_interior(diag(2, -6), (2, 1), (1, 0), K3)
    assert dec.value and dec.certificate.kind == "no_separating_wall"
    dec = in_movable_interior(L, (1, 1), (1, 0), K3)
    assert not dec.value and dec.certificate.kind == "outside_positive_cone"


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 12), st.integers(-12, 12))
def test_movable_interior_matches_chambers(x, y):
    L = diag(4, -6)
    if 4 * x * x - 6 * y * y <= 0:
        return
    dec = chamber_decomposition_rank2(L, (1, 0), [(1, 1), (1, -1)])
    where = dec.locate((x, y))
    res = in_movable_interior(L, (x, y), (1, 0), K3)
    if where is None:
        assert not res.value  # on a wall: E.h = 0 counts as separating
    else:
        assert res.value == (where == dec.ample_index)


def test_chambers():
    dec = chamber_decomposition_rank2(diag(4, -6), (1, 0), [(1, 1), (1, -1)])
    assert dec.cuts == ((3, -2), (3, 2))
    assert len(dec.chambers) == 3
    assert dec.ample_index == 1
    for i, ch in enumerate(dec.chambers):
        assert dec.locate(ch.sample) == i
    assert dec.locate((3, 2)) is None
    with pytest.raises(DomainError):
        dec.locate((1, 1))
    with pytest.raises(DomainError):
        chamber_decomposition_rank2(diag(2, -2), (1, 0), [(0, 1)])


def test_chambers_in_plane():
    M = GramLattice(((4, 0, 0), (0, -6, 0), (0, 0, -2)))
    plane = Sublattice(M, (M.vector((1, 0, 0)), M.vector((0, 1, 0))))
    dec = chamber_decomposition_rank2(M, (1, 0, 0), [(1, 1, 0), (1, -1, 0), (1, 1, 1)], plane=plane)
    assert len(dec.chambers) == 3


def test_svg():
    svg = render_svg(chamber_decomposition_rank2(diag(4, -6), (1, 0), [(1, 1), (1, -1)]))
    assert svg.startswith("<svg") and svg.count("<line") == 2
