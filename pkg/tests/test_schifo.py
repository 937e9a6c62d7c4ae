import copy
import random
from math import gcd

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from hklattice import intmat
from hklattice.catalog import parse_blocks
from hklattice.cones import BIR_INFINITE
from hklattice.errors import CertificateError, DomainError
from hklattice.forms import BinaryForm, represents
from hklattice.lattice import is_saturated, pair, square
from hklattice.schifo import (Q, AvoidanceCertificate, SchifoParams, build_h, build_lattice,
                              certify_avoidance, choose_m, construct_infinite_bir_lattice, m1,
                              validate_certificate)

U3 = parse_blocks("U^3")
ELL = (1, 1, 0, 0, 0, 0)
A_VEC = (0, 0, 1, -1, 0, 0)


@pytest.fixture(scope="module")
def worked():
    return construct_infinite_bir_lattice(U3, ELL, A_VEC, 2)


def test_Q_against_oracle():
    for d in range(1, 600):
        assert Q(d) == oracles.smallest_square_multiple(d)


@given(st.integers(1, 10**6))
def test_Q_properties(d):
    q = Q(d)
    assert oracles.is_square(q) and q % d == 0
    assert (q == d) == oracles.is_square(d)


def test_Q_domain():
    with pytest.raises(DomainError):
        Q(0)


def test_m1_and_m():
    assert m1(2, 2) == 4
    assert choose_m(2, 2) == 8
    assert m1(2, 10) == oracles.FROZEN["m1_A1_N10"]
    assert m1(1, 0) == 4
    m = choose_m(2, 10)
    assert m % m1(2, 10) == 0 and not oracles.is_square(m)


def test_worked_instance(worked):
    fz = oracles.FROZEN["worked_instance"]
    lat = worked.lattice
    assert m1(lat.A, 2) == fz["m1"] and lat.m == fz["m"]
    assert square(lat.h) == fz["h_square"]
    assert lat.gram == fz["gram"] and lat.n == 1
    assert worked.report.verdict == BIR_INFINITE
    reasons = worked.certificate.per_i_reasons
    assert [r["reason"] for r in reasons] == ["nonsquare_coefficient", "parity", "forced_square_then_mod4"]
    assert reasons[0]["value"] == 1016 == 2**3 * 127
    assert reasons[2]["d"] == 1 and reasons[2]["q"] == 1


def test_worked_instance_reasons_by_hand(worked):
    # i = 2: x^2 - 1016 y^2 = -1 forces x^2 = -1 mod 4
    assert all((x * x + 1) % 4 for x in range(4))
    assert not oracles.is_square(1016)


def test_structure(worked):
    lat, params = worked.lattice, worked.params
    assert is_saturated(lat.sublattice)
    assert pair(lat.b, params.ell) == 0
    assert pair(lat.w_diag, params.ell) == 0
    assert abs(intmat.det([list(r) for r in lat.change_of_basis])) == 1
    assert pair(lat.k, params.ell) == 0 and pair(lat.k, lat.w) == 1


def test_certificate_roundtrip(worked):
    d = worked.certificate.to_dict()
    assert validate_certificate(d)
    assert AvoidanceCertificate.from_dict(d).to_dict() == d


@pytest.mark.parametrize("path,value", [
    (("per_i_reasons", 2, "residue_trace", "target"), 2),
    (("per_i_reasons", 2, "Q"), 4),
    (("per_i_reasons", 1, "reason"), "forced_square_then_mod4"),
    (("per_i_reasons", 0, "isqrt"), 30),
    (("m",), 9),
    (("primitivity_witness",), [0, 0, 0, 0, 1, 0]),
])
def test_tampering_names_index(worked, path, value):
    d = copy.deepcopy(worked.certificate.to_dict())
    node = d
    for key in path[:-1]:
        node = node[key]
    node[path[-1]] = value
    with pytest.raises(CertificateError) as exc:
        validate_certificate(d)
    if path[0] == "per_i_reasons":
        assert exc.value.index == path[1]


def test_monotone_in_N():
    res = construct_infinite_bir_lattice(U3, ELL, A_VEC, 6)
    d = res.certificate.to_dict()
    for N in range(7):
        sub = copy.deepcopy(d)
        sub["N"] = N
        sub["per_i_reasons"] = sub["per_i_reasons"][:N + 1]
        assert validate_certificate(sub)


def test_N_zero():
    res = construct_infinite_bir_lattice(U3, ELL, A_VEC, 0)
    assert [r["reason"] for r in res.certificate.per_i_reasons] == ["nonsquare_coefficient"]


def test_N_ten():
    res = construct_infinite_bir_lattice(U3, ELL, A_VEC, 10, box=300)
    assert m1(2, 10) == 4 * Q(1) * Q(2) * Q(3) * Q(4) * Q(5)
    assert res.lattice.m % m1(2, 10) == 0
    assert len(res.certificate.per_i_reasons) == 11
    f = BinaryForm(*[res.lattice.gram[0][0], 0, res.lattice.gram[1][1]])
    for i in range(11):
        assert not represents(f, -i).value


def test_definite_branch():
    res = construct_infinite_bir_lattice(U3, ELL, (0, 0, 1, 1, 0, 0), 3)
    assert res.report is None and "definite" in res.note
    assert res.certificate.per_i_reasons[0]["definite"] is True


def test_ell_a_not_orthogonal():
    res = construct_infinite_bir_lattice(U3, ELL, (1, 0, 1, -1, 0, 0), 2)
    params = res.params
    assert pair(params.ell, params.a) != 0
    assert pair(res.lattice.b, params.ell) == 0
    validate_certificate(res.certificate.to_dict())


def test_rejects_bad_input():
    with pytest.raises(DomainError):
        SchifoParams(U3, ELL, (2, 2, 0, 0, 0, 0), 2)
    with pytest.raises(DomainError):
        SchifoParams(U3, (1, -1, 0, 0, 0, 0), A_VEC, 2)
    with pytest.raises(DomainError):
        SchifoParams(U3, (2, 2, 0, 0, 0, 0), A_VEC, 2)
    with pytest.raises(DomainError):
        SchifoParams(U3, ELL, A_VEC, 2, m=16)


def test_explicit_n_and_m():
    res = construct_infinite_bir_lattice(U3, ELL, A_VEC, 2, n=3, m=24)
    assert res.lattice.n == 3 and res.lattice.m == 24
    validate_certificate(res.certificate.to_dict(), rerun_box=200)


def test_n_zero_is_definite():
    params = SchifoParams(U3, ELL, A_VEC, 2)
    lat = build_lattice(params, build_h(params), 0)
    assert lat.diagonal == (2, 2 * 8) and not lat.is_hyperbolic
    with pytest.raises(DomainError):
        certify_avoidance(lat, params)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2**31 - 1))
def test_random_instances_against_box(seed):
    rng = random.Random(seed)
    M = parse_blocks(rng.choice(["U^3", "U^3 + <-2>"]))
    while True:
        x = rng.randint(1, 3)
        ell = [x, rng.randint(1, 3)] + [0] * (M.rank - 2)
        if gcd(*ell) == 1:
            break
    a = [0, 0, rng.randint(-2, 2), rng.randint(-2, 2)] + [0, 0] + [rng.randint(-1, 1)] * (M.rank - 6)
    a[0] = rng.randint(-1, 1)
    if intmat.rank([ell, a]) < 2:
        return
    N = rng.randint(0, 6)
    res = construct_infinite_bir_lattice(M, tuple(ell), tuple(a), N, box=60)
    lat = res.lattice
    validate_certificate(res.certificate.to_dict())
    A, C = lat.diagonal
    for i in range(N + 1):
        assert oracles.box_represents((A, 0, C), -i, 40) is None
    assert is_saturated(lat.sublattice)
