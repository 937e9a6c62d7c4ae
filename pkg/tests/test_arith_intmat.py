from math import gcd, isqrt

from hypothesis import given, settings, strategies as st

import oracles
from hklattice import arith, intmat


@given(st.integers(min_value=0, max_value=10**12))
def test_is_square(n):
    assert arith.is_square(n) == (isqrt(n) ** 2 == n)


def test_is_square_negative():
    assert not arith.is_square(-4)


@given(st.integers(-10**6, 10**6), st.integers(-10**6, 10**6))
def test_xgcd(a, b):
    g, x, y = arith.xgcd(a, b)
    assert g == gcd(a, b)
    assert a * x + b * y == g


@given(st.integers(1, 10**6))
def test_factorize_roundtrip(n):
    out = 1
    for p, e in arith.factorize(n).items():
        assert all(p % q for q in range(2, isqrt(p) + 1))
        out *= p ** e
    assert out == n


def test_divisors_and_square_divisors():
    assert arith.divisors(36) == [1, 2, 3, 4, 6, 9, 12, 18, 36]
    assert arith.square_divisors(72) == [1, 2, 3, 6]
    assert all(72 % (g * g) == 0 for g in arith.square_divisors(72))


matrices = st.integers(1, 4).flatmap(
    lambda n: st.lists(st.lists(st.integers(-6, 6), min_size=n, max_size=n), min_size=n, max_size=n))


@settings(max_examples=80)
@given(matrices)
def test_det_matches_oracle(M):
    assert intmat.det(M) == oracles.det(M)


@settings(max_examples=60)
@given(matrices)
def test_smith_normal_form(M):
    U, D, V = intmat.smith_normal_form(M)
    assert abs(intmat.det(U)) == 1 and abs(intmat.det(V)) == 1
    assert intmat.matmul(intmat.matmul(U, M), V) == D
    n = len(M)
    assert all(D[i][j] == 0 for i in range(n) for j in range(n) if i != j)
    diag = [D[i][i] for i in range(n)]
    assert all(d >= 0 for d in diag)
    for i in range(n - 1):
        if diag[i] == 0:
            assert diag[i + 1] == 0
        else:
            assert diag[i + 1] % diag[i] == 0
    assert [d for d in diag if d > 1] == oracles.invariant_factors(M)


def test_integer_kernel_saturated():
    K = intmat.integer_kernel([[2, 4, 6]])
    assert len(K) == 2
    for row in K:
        assert 2 * row[0] + 4 * row[1] + 6 * row[2] == 0
    # saturated: the 2x2 minors of the kernel basis are coprime
    g = 0
    for c1, c2 in ((0, 1), (0, 2), (1, 2)):
        g = gcd(g, K[0][c1] * K[1][c2] - K[0][c2] * K[1][c1])
    assert g == 1


def test_complete_to_unimodular():
    W = intmat.complete_to_unimodular([3, 5, 7])
    assert abs(intmat.det(W)) == 1
    assert [row[0] for row in W] == [3, 5, 7]
