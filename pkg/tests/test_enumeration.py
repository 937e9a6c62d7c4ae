import random
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from hklattice.catalog import get, parse_blocks
from hklattice.enumeration import (EnumerationQuery, enumerate_definite, enumerate_separating_walls,
                                   majorant_gram, separation_constant, short_vectors)
from hklattice.errors import CapacityError, DomainError
from hklattice.lattice import GramLattice, pair, square
from hklattice.walls import builtin_walls, simple_walls


def test_e8_roots():
    E8 = get("E8(-1)")
    roots = enumerate_definite(EnumerationQuery(E8, -2))
    assert len(roots) == oracles.FROZEN["e8_roots"]
    assert all(square(v) == -2 for v in roots)
    assert len({v.coords for v in roots}) == 240


def test_e8_norm4():
    E8 = get("E8(-1)")
    assert len(enumerate_definite(EnumerationQuery(E8, -4))) == oracles.FROZEN["e8_norm4"]


def test_wrong_sign_and_zero():
    E8 = get("E8(-1)")
    assert enumerate_definite(EnumerationQuery(E8, 2)) == []
    assert enumerate_definite(EnumerationQuery(E8, 0)) == []


def test_indefinite_rejected():
    with pytest.raises(DomainError):
        enumerate_definite(EnumerationQuery(get("U"), 2))


def test_constraints():
    A2 = get("A2(-1)")
    e1 = A2.basis_vector(0)
    all_roots = enumerate_definite(EnumerationQuery(A2, -2))
    assert len(all_roots) == 6
    pos = enumerate_definite(EnumerationQuery(A2, -2, ((e1, ">", 0),)))
    assert len(pos) == 3  # pairings of a root with the six roots: +-2, +-1, +-1
    assert all(pair(v, e1) > 0 for v in pos)
    with pytest.raises(DomainError):
        EnumerationQuery(A2, -2, ((e1, "!=", 0),))


def test_caps():
    E8 = get("E8(-1)")
    with pytest.raises(CapacityError) as exc:
        enumerate_definite(EnumerationQuery(E8, -4), radius_cap=2)
    assert exc.value.cap == "radius"
    with pytest.raises(CapacityError):
        enumerate_definite(EnumerationQuery(E8, -2), rank_cap=4)


small_definite = st.sampled_from([
    ((2, 1), (1, 2)), ((2, 0, 0), (0, 4, 1), (0, 1, 6)), ((4, 2, 1), (2, 4, 2), (1, 2, 4)), ((1, 0), (0, 3))])


@settings(max_examples=30, deadline=None)
@given(small_definite, st.integers(1, 12))
def test_short_vectors_against_box(G, bound):
    got = set(short_vectors(G, bound))
    expect = {v for v in product(range(-4, 5), repeat=len(G)) if any(v) and oracles.quad(G, v) <= bound}
    assert got == expect


def test_majorant_is_positive_definite():
    L = parse_blocks("<2> + <-2> + <-6>")
    M = majorant_gram(L, (1, 0, 0))
    short_vectors(M, 1)  # raises if not positive definite
    rng = random.Random(3)
    for _ in range(50):
        v = [rng.randint(-5, 5) for _ in range(3)]
        val = sum(M[i][j] * v[i] * v[j] for i in range(3) for j in range(3))
        assert val >= 0 and (val > 0 or not any(v))


def test_separation_constant_bound():
    G = ((2, 0, 0), (0, -2, 0), (0, 0, -6))
    ell, h = (1, 0, 0), (2, 1, 0)
    kappa = separation_constant(oracles.quad(G, ell), oracles.quad(G, h), oracles.bil(G, ell, h))

    def maj(u, x):
        return Fraction(2 * oracles.bil(G, x, u) ** 2, oracles.quad(G, u)) - oracles.quad(G, x)

    rng = random.Random(5)
    for k in range(9):
        u = tuple(8 * a + k * (b - a) for a, b in zip(ell, h))
        for _ in range(40):
            x = tuple(rng.randint(-6, 6) for _ in range(3))
            assert maj(ell, x) <= kappa * maj(u, x)


def test_separating_walls_rank2():
    L = parse_blocks("<4> + <-6>")
    walls = builtin_walls("K3")
    got = enumerate_separating_walls(L, L.vector((1, 0)), L.vector((3, 2)), walls)
    assert [v.coords for v in got] == [(1, 1)]
    assert enumerate_separating_walls(L, L.vector((1, 0)), L.vector((3, 1)), walls) == []


def _rank3_instances(count, seed=7):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        a = rng.choice([2, 4, 6])
        b, c = -rng.choice([2, 4, 6, 8]), -rng.choice([2, 4, 6, 10])
        L = GramLattice(((a, 0, 0), (0, b, 0), (0, 0, c)))
        ell = (1, 0, 0)
        h = (rng.randint(1, 4), rng.randint(-3, 3), rng.randint(-3, 3))
        if oracles.quad(L.gram, h) > 0:
            out.append((L, ell, h))
    return out


@pytest.mark.parametrize("L,ell,h", _rank3_instances(10))
def test_separating_walls_against_box(L, ell, h):
    walls = simple_walls(-2, -4)
    got = {v.coords for v in enumerate_separating_walls(L, L.vector(ell), L.vector(h), walls)}
    doubled = {v.coords for v in enumerate_separating_walls(L, L.vector(ell), L.vector(h), walls, radius_scale=2)}
    assert got == doubled
    from math import gcd
    box = set()
    for v in product(range(-8, 9), repeat=3):
        if gcd(*v) != 1 or oracles.quad(L.gram, v) not in (-2, -4):
            continue
        if oracles.bil(L.gram, v, ell) > 0 >= oracles.bil(L.gram, v, h):
            box.add(v)
    assert box <= got
