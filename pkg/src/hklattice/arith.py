"""Small exact integer helpers: factorisation, squares, divisors, xgcd."""

from __future__ import annotations

from functools import reduce
from math import gcd, isqrt


def is_square(n: int) -> bool:
    if n < 0:
        return False
    r = isqrt(n)
    return r * r == n


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with x*a + y*b == g == gcd(a, b) >= 0."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def content(values) -> int:
    return reduce(gcd, (int(v) for v in values), 0)


def factorize(n: int) -> dict[int, int]:
    """Prime factorisation of |n| by trial division (n != 0)."""
    n = abs(int(n))
    if n == 0:
        raise ValueError("cannot factor 0")
    out: dict[int, int] = {}
    for p in (2, 3):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    p, step = 5, 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += step
        step = 6 - step
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def divisors(n: int) -> list[int]:
    """Positive divisors of |n|, ascending."""
    divs = [1]
    for p, e in factorize(n).items():
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def square_divisors(n: int) -> list[int]:
    """All g >= 1 with g*g dividing n."""
    out = [1]
    for p, e in factorize(n).items():
        out = [g * p**k for g in out for k in range(e // 2 + 1)]
    return sorted(out)


def sign(x) -> int:
    return (x > 0) - (x < 0)
