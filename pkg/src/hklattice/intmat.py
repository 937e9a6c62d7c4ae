"""Exact integer matrix routines.

Matrices are lists of row lists of Python ints.  Nothing here touches floating
point; all transforms returned are unimodular integer matrices.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd


def identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def copy(A) -> list[list[int]]:
    return [list(map(int, row)) for row in A]


def transpose(A) -> list[list[int]]:
    return [list(col) for col in zip(*A)] if A else []


def matmul(A, B) -> list[list]:
    Bt = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def matvec(A, v) -> list:
    return [sum(a * x for a, x in zip(row, v)) for row in A]


def dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def det(A) -> int:
    """Determinant by fraction-free Bareiss elimination."""
    n = len(A)
    if n == 0:
        return 1
    M = copy(A)
    sgn, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k] != 0:
                    M[k], M[i] = M[i], M[k]
                    sgn = -sgn
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sgn * M[n - 1][n - 1]


def inverse_unimodular(A) -> list[list[int]]:
    inv = rational_inverse(A)
    out = [[int(x) for x in row] for row in inv]
    if any(Fraction(x) != y for r1, r2 in zip(out, inv) for x, y in zip(r1, r2)):
        raise ValueError("matrix is not unimodular")
    return out


def rational_inverse(A) -> list[list[Fraction]]:
    n = len(A)
    M = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(A)]
    for c in range(n):
        p = next((r for r in range(c, n) if M[r][c] != 0), None)
        if p is None:
            raise ZeroDivisionError("singular matrix")
        M[c], M[p] = M[p], M[c]
        piv = M[c][c]
        M[c] = [x / piv for x in M[c]]
        for r in range(n):
            if r != c and M[r][c] != 0:
                f = M[r][c]
                M[r] = [x - f * y for x, y in zip(M[r], M[c])]
    return [row[n:] for row in M]


def solve_rational(A, b) -> list[Fraction] | None:
    """Least solution of A x = b over Q for full-column-rank A; None if inconsistent."""
    m = len(A)
    n = len(A[0]) if m else 0
    M = [[Fraction(x) for x in row] + [Fraction(bb)] for row, bb in zip(A, b)]
    piv_cols = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, m) if M[i][c] != 0), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        pv = M[r][c]
        M[r] = [x / pv for x in M[r]]
        for i in range(m):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        piv_cols.append(c)
        r += 1
    if any(M[i][n] != 0 for i in range(r, m)):
        return None
    x = [Fraction(0)] * n
    for i, c in enumerate(piv_cols):
        x[c] = M[i][n]
    return x


def rank(A) -> int:
    if not A:
        return 0
    _, D, _ = smith_normal_form(A)
    return sum(1 for i in range(min(len(D), len(D[0]))) if D[i][i] != 0)


def smith_normal_form(A):
    """Return (U, D, V) with U*A*V == D diagonal, d_i | d_{i+1}, d_i >= 0.

    U and V are unimodular.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    D = copy(A)
    U = identity(m)
    V = identity(n)

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        D[dst] = [a + q * b for a, b in zip(D[dst], D[src])]
        U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, q):
        for row in D:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if D[i][j] and (best is None or abs(D[i][j]) < abs(D[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        while True:
            done = True
            for i in range(t + 1, m):
                if D[i][t]:
                    add_row(i, t, -(D[i][t] // D[t][t]))
                    if D[i][t]:
                        swap_rows(t, i)
                        done = False
            for j in range(t + 1, n):
                if D[t][j]:
                    add_col(j, t, -(D[t][j] // D[t][t]))
                    if D[t][j]:
                        swap_cols(t, j)
                        done = False
            if not done:
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if D[i][j] % D[t][t]), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    return U, D, V


def elementary_divisors(A) -> list[int]:
    _, D, _ = smith_normal_form(A)
    return [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0))]


def integer_kernel(A, ncols: int | None = None) -> list[list[int]]:
    """Basis (as rows) of {x in Z^n : A x = 0}; the result is saturated."""
    if not A:
        return identity(ncols or 0)
    n = len(A[0])
    _, D, V = smith_normal_form(A)
    r = sum(1 for i in range(min(len(D), n)) if D[i][i] != 0)
    # A V = U^-1 D, so the last n - r columns of V span the kernel
    return [[V[i][j] for i in range(n)] for j in range(r, n)]


def saturate_rows(B) -> list[list[int]]:
    """Rows spanning (Q-span of rows of B) intersected with Z^n."""
    if not B:
        return []
    U, D, V = smith_normal_form(B)
    n = len(B[0])
    r = sum(1 for i in range(min(len(D), n)) if D[i][i] != 0)
    Vinv = inverse_unimodular(V)
    # B = U^-1 D V^-1, so the row span of B lives in the first r rows of V^-1
    return [Vinv[i] for i in range(r)]


def complete_to_unimodular(v) -> list[list[int]]:
    """Unimodular matrix whose first column is the primitive vector v."""
    n = len(v)
    U, D, V = smith_normal_form([[x] for x in v])
    if D[0][0] != 1:
        raise ValueError("vector is not primitive")
    # U v = e_1 (up to V = [[+-1]])
    W = inverse_unimodular(U)
    s = V[0][0]
    return [[W[i][j] * (s if j == 0 else 1) for j in range(n)] for i in range(n)]


def content_of(v) -> int:
    g = 0
    for x in v:
        g = gcd(g, int(x))
    return g
