from hypothesis import given, settings, strategies as st

import oracles
from hklattice.bruteforce import find_value, search_box
from hklattice.certificates import Certificate, Decision
from hklattice.forms import BinaryForm

c = st.integers(-9, 9)


@settings(max_examples=80, deadline=None)
@given(c, c, c, st.integers(-15, 15))
def test_find_value_matches_naive(a, b, cc, n):
    if b * b - a * cc == 0:
        return
    f = BinaryForm(a, b, cc)
    hit = find_value(f, n, 10)
    naive = oracles.box_represents(f.classical, n, 10)
    assert (hit is None) == (naive is None)
    if hit is not None:
        assert f(*hit) == n and hit != (0, 0) and max(map(abs, hit)) <= 10


def test_large_coefficients_fall_back_to_exact():
    f = BinaryForm(2**40, 0, -(2**40) * 3)
    hit = find_value(f, -(2**41), 5)
    assert hit is not None and f(*hit) == -(2**41)


def test_search_box():
    res = search_box(BinaryForm(1, 0, -3), [-2, -1, 0, 1], 20)
    assert res[-1] is None and res[0] is None
    assert res[1] is not None and res[-2] is not None


def test_certificate_roundtrip():
    cert = Certificate("witness", "represents 1", {"vector": [1, 0], "value": 1})
    assert Certificate.from_dict(cert.to_dict()) == cert
    assert bool(Decision(True, (1, 0), cert)) and not Decision(False, None, cert)
