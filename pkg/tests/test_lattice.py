import random

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from hklattice import intmat
from hklattice.catalog import get, k3n_lattice, kumn_lattice, load_catalog, parse_blocks
from hklattice.errors import DomainError
from hklattice.lattice import (GramLattice, Sublattice, apply, direct_sum,
                               discriminant_group, divisibility, eichler_transvection,
                               hyperbolic_complement, is_isometry, is_primitive, is_saturated,
                               orientation_character, orthogonal_complement, pair, primitive_part,
                               rescale, saturation, signature, span, square)

U = GramLattice(((0, 1), (1, 0)), label="U", u_planes=((0, 1),))


def test_gram_validation():
    with pytest.raises(DomainError):
        GramLattice(((1, 2), (3, 4)))
    with pytest.raises(DomainError):
        GramLattice(((1, 1), (1, 1)))
    with pytest.raises(DomainError):
        GramLattice(((2, 0), (0, 2)), u_planes=((0, 1),))


def test_u_invariants():
    assert signature(U) == (1, 1)
    assert discriminant_group(U).is_trivial
    assert U.det == -1 and U.is_even


def test_vector_arithmetic():
    L = parse_blocks("U + <-2>")
    v = L.vector((1, 2, 1))
    w = L.vector((0, 1, 1))
    assert (v + w).coords == (1, 3, 2)
    assert (v - w).coords == (1, 1, 0)
    assert (3 * v).coords == (3, 6, 3)
    assert square(v) == 2 * 1 * 2 - 2
    assert pair(v, w) == 1 - 2
    assert v.square == square(v)


def test_mixed_lattices_rejected():
    with pytest.raises(DomainError):
        pair(U.vector((1, 0)), parse_blocks("<2> + <-2>").vector((1, 0)))


def test_divisibility_examples():
    L = parse_blocks("U^3 + <-4>")
    delta = L.basis_vector(6)
    assert square(delta) == -4 and divisibility(delta) == 4
    v = L.vector((1, 1, 0, 0, 0, 0, 1))
    assert divisibility(v) == 1
    with pytest.raises(DomainError):
        divisibility(L.zero_vector())


def test_primitivity():
    v = U.vector((2, 4))
    assert not is_primitive(v)
    assert primitive_part(v).coords == (1, 2)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(-5, 5), min_size=6, max_size=6))
def test_divisibility_divides_square_pairings(c):
    L = parse_blocks("U + <2> + <-6> + A2(-1)")
    v = L.vector(c)
    if v.is_zero():
        return
    d = divisibility(v)
    for j in range(L.rank):
        assert pair(v, L.basis_vector(j)) % d == 0
    assert square(v) % d == 0


@pytest.mark.parametrize("name", sorted(load_catalog()))
def test_catalog_discriminant_orders(name):
    L = get(name)
    D = discriminant_group(L)
    assert D.order == abs(L.det) == abs(oracles.det(L.gram))
    if L.rank <= 6:
        assert list(D.cyclic_factors) == oracles.invariant_factors(L.gram)
    for a, b in zip(D.cyclic_factors, D.cyclic_factors[1:]):
        assert b % a == 0


def test_catalog_known_values():
    assert signature(get("K3")) == (3, 19)
    assert discriminant_group(get("K3")).is_trivial
    assert list(discriminant_group(get("K3[2]")).cyclic_factors) == [2]
    assert list(discriminant_group(get("Kum2")).cyclic_factors) == [6]
    assert list(discriminant_group(get("OG10")).cyclic_factors) == [3]
    assert list(discriminant_group(get("OG6")).cyclic_factors) == [2, 2]
    assert k3n_lattice(3).gram == get("K3[3]").gram
    assert kumn_lattice(3).gram == get("Kum3").gram
    assert len(get("K3").u_planes) == 3


def test_block_parser():
    L = parse_blocks("U^2 + E8 + <-2>^2")
    assert L.rank == 4 + 8 + 2
    assert signature(L) == (10, 4)
    with pytest.raises(DomainError):
        parse_blocks("V^2")


def test_direct_sum_and_rescale():
    L = direct_sum(U, rescale(U, 2))
    assert L.gram[2][3] == 2 and L.gram[0][1] == 1
    assert discriminant_group(L).cyclic_factors == (2, 2)


def test_complement_of_delta():
    L = parse_blocks("U^3 + <-2>")
    S = orthogonal_complement(span([L.basis_vector(6)]))
    assert S.rank == 6
    assert discriminant_group(S.as_lattice()).is_trivial


def test_complement_pairs_to_zero():
    L = parse_blocks("U^3 + <-6>")
    v = L.vector((1, 3, 0, 1, 0, 0, 1))
    S = orthogonal_complement(span([v]))
    assert S.rank == L.rank - 1
    assert all(pair(b, v) == 0 for b in S.basis)
    assert is_saturated(S)


def test_saturation():
    S = Sublattice(U, (U.vector((2, 0)), U.vector((0, 2))))
    assert not is_saturated(S)
    T = saturation(S)
    assert abs(intmat.det(T.rows())) == 1
    assert T.contains(U.vector((1, 0)))
    assert S.coordinates_of(U.vector((1, 1))) is not None


def _random_vector(rng, n, k=4):
    while True:
        v = tuple(rng.randint(-k, k) for _ in range(n))
        if any(v):
            return v


def test_eichler_transvections_preserve_form():
    rng = random.Random(11)
    L = parse_blocks("U^2 + A2(-1) + <-4>")
    done = 0
    while done < 100:
        e = L.vector((1, 0, 0, 0, 0, 0, 0) if rng.random() < 0.5 else (0, 0, 0, 1, 0, 0, 0))
        a = L.vector(_random_vector(rng, L.rank))
        if pair(e, a):
            a = a - pair(e, a) * L.vector((0, 1, 0, 0, 0, 0, 0) if e.coords[0] else (0, 0, 1, 0, 0, 0, 0))
        if pair(e, a):
            continue
        T = eichler_transvection(e, a)
        assert is_isometry(L, T)
        x = L.vector(_random_vector(rng, L.rank))
        assert square(apply(T, x)) == square(x)
        assert orientation_character(L, T) in (1, -1)
        done += 1


def test_transvection_requires_isotropic():
    L = parse_blocks("U + <-2>")
    with pytest.raises(DomainError):
        eichler_transvection(L.vector((1, 1, 0)), L.vector((0, 0, 1)))


def test_orientation_character_of_swap():
    swap = [[0, 1], [1, 0]]
    neg = [[-1, 0], [0, -1]]
    assert orientation_character(U, [[1, 0], [0, 1]]) == 1
    assert orientation_character(U, neg) == -1
    assert orientation_character(U, swap) in (1, -1)


@pytest.mark.parametrize("tail", ["<-2>", "<-6>", "A2(-1)"])
def test_hyperbolic_complement_random(tail):
    rng = random.Random(hash(tail) % 1000)
    M = parse_blocks("U^3 + " + tail)
    count = 0
    while count < 50:
        ell = M.vector(_random_vector(rng, M.rank, 6))
        a = M.vector(_random_vector(rng, M.rank, 6))
        if not is_primitive(ell) or intmat.rank([list(ell.coords), list(a.coords)]) < 2:
            continue
        P = hyperbolic_complement(M, ell, a)
        u, v = P.basis
        assert P.gram == ((0, 1), (1, 0))
        assert pair(u, ell) == pair(u, a) == pair(v, ell) == pair(v, a) == 0
        assert is_saturated(P)
        count += 1


def test_hyperbolic_complement_worked():
    M = parse_blocks("U^3")
    P = hyperbolic_complement(M, M.vector((1, 1, 0, 0, 0, 0)), M.vector((0, 0, 1, -1, 0, 0)))
    assert [b.coords for b in P.basis] == [(0, 0, 0, 0, 1, 0), (0, 0, 0, 0, 0, 1)]


def test_hyperbolic_complement_needs_planes():
    M = GramLattice(parse_blocks("U^3").gram)
    with pytest.raises(DomainError):
        hyperbolic_complement(M, M.vector((1, 1, 0, 0, 0, 0)), M.vector((0, 0, 1, 0, 0, 0)))
