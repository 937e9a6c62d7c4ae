"""Box searches for values of binary forms, used as independent cross-checks.

For each y in the box the equation f(x, y) = n is a quadratic in x; solving
it exactly costs O(box) per target.  Large boxes are vectorised with numpy
when every intermediate fits comfortably in int64, and fall back to Python
integers otherwise.
"""

from __future__ import annotations

from math import isqrt

import numpy as np

_INT64_SAFE = 2**61


def _solve_python(a, b, c, n, box):
    # a n = (a x + b y)^2 - disc y^2  when a != 0
    disc = b * b - a * c
    for y in range(-box, box + 1):
        if a == 0:
            rest = n - c * y * y
            if b == 0 or y == 0:
                if rest == 0 and (y != 0 or box > 0):
                    return (1 if y == 0 else 0, y)
                continue
            if rest % (2 * b * y) == 0:
                x = rest // (2 * b * y)
                if abs(x) <= box and (x, y) != (0, 0):
                    return (x, y)
            continue
        R = a * n + disc * y * y
        if R < 0:
            continue
        s = isqrt(R)
        if s * s != R:
            continue
        for u in (s, -s):
            num = u - b * y
            if num % a == 0:
                x = num // a
                if abs(x) <= box and (x, y) != (0, 0):
                    return (x, y)
    return None


def _solve_numpy(a, b, c, n, box):
    disc = b * b - a * c
    y = np.arange(-box, box + 1, dtype=np.int64)
    R = a * n + disc * y * y
    ok = R >= 0
    Rp = np.where(ok, R, 0)
    s = np.floor(np.sqrt(Rp.astype(np.float64))).astype(np.int64)
    s = np.where(s * s > Rp, s - 1, s)
    s = np.where((s + 1) * (s + 1) <= Rp, s + 1, s)
    ok &= s * s == Rp
    for u in (s, -s):
        num = u - b * y
        good = ok & (num % a == 0)
        x = np.where(good, num // a, 0)
        good &= (np.abs(x) <= box) & ((x != 0) | (y != 0))
        idx = np.flatnonzero(good)
        if idx.size:
            i = idx[0]
            return (int(x[i]), int(y[i]))
    return None


def find_value(form, n: int, box: int):
    """Some nonzero (x, y) with |x|, |y| <= box and f(x, y) = n, or None."""
    a, b, c = form.a, form.b, form.c
    if a == 0 and c != 0:
        hit = find_value(type(form)(c, b, a), n, box)
        return None if hit is None else (hit[1], hit[0])
    disc = b * b - a * c
    big = abs(disc) * box * box + abs(a * n) + (abs(b) + 1) * (isqrt(abs(disc)) + 1) * box * 4
    if a != 0 and big < _INT64_SAFE:
        return _solve_numpy(a, b, c, n, box)
    return _solve_python(a, b, c, n, box)


def search_box(form, targets, box: int) -> dict[int, tuple | None]:
    return {n: find_value(form, n, box) for n in targets}
