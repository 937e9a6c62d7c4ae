"""Exact short-vector enumeration and separating-wall search.

Everything runs over Python ints and Fractions.  The core is a Fincke-Pohst
depth-first search on the completed-square decomposition of a positive
definite form; integer ranges at each level are computed exactly.
"""

from __future__ import annotations

import operator
from dataclasses import dataclass
from fractions import Fraction
from math import floor, isqrt

from . import intmat
from .errors import CapacityError, DomainError
from .lattice import GramLattice, LatticeVector, signature
from .walls import WallSpec

DEFAULT_RANK_CAP = 6
DEFAULT_DEFINITE_RANK_CAP = 16
DEFAULT_RADIUS_CAP = 10**6
DEFAULT_WALL_RADIUS_CAP = Fraction(10**5)

_OPS = {">": operator.gt, ">=": operator.ge, "=": operator.eq, "==": operator.eq,
        "<=": operator.le, "<": operator.lt, "≥": operator.ge, "≤": operator.le}


@dataclass(frozen=True)
class EnumerationQuery:
    lattice: GramLattice
    target_square: int
    constraints: tuple = ()  # (vector coords, op, bound): pair(v, vector) op bound

    def __post_init__(self):
        cons = []
        for vec, op, bound in self.constraints:
            if op not in _OPS:
                raise DomainError(f"unknown comparison {op!r}")
            coords = tuple(vec.coords if isinstance(vec, LatticeVector) else vec)
            if len(coords) != self.lattice.rank:
                raise DomainError("constraint vector has the wrong length")
            cons.append((coords, op, bound))
        object.__setattr__(self, "constraints", tuple(cons))

    def admits(self, v) -> bool:
        G = self.lattice.gram
        for vec, op, bound in self.constraints:
            if not _OPS[op](intmat.dot(intmat.matvec(G, v), vec), bound):
                return False
        return True


def _completed_squares(gram):
    """Return (d, mu) with Q(x) = sum_i d[i] * (x_i + sum_{j>i} mu[i][j] x_j)^2."""
    n = len(gram)
    Q = [[Fraction(x) for x in row] for row in gram]
    for i in range(n):
        if Q[i][i] <= 0:
            raise DomainError("form is not positive definite")
        for j in range(i + 1, n):
            Q[j][i] = Q[i][j]
            Q[i][j] = Q[i][j] / Q[i][i]
        for k in range(i + 1, n):
            for l in range(k, n):
                Q[k][l] -= Q[k][i] * Q[i][l]
    d = [Q[i][i] for i in range(n)]
    mu = [[Q[i][j] if j > i else Fraction(0) for j in range(n)] for i in range(n)]
    return d, mu


def _int_range(center: Fraction, t: Fraction) -> range:
    """Integers x with (x - center)^2 <= t."""
    if t < 0:
        return range(0)
    r = isqrt(floor(t)) + 1
    lo = floor(center) - r
    hi = floor(center) + r + 1
    while lo <= hi and (lo - center) ** 2 > t:
        lo += 1
    while hi >= lo and (hi - center) ** 2 > t:
        hi -= 1
    return range(lo, hi + 1)


def short_vectors(gram, bound) -> list[tuple[int, ...]]:
    """All nonzero integer x with Q(x) <= bound for a positive definite rational Gram."""
    n = len(gram)
    if n == 0:
        return []
    bound = Fraction(bound)
    d, mu = _completed_squares(gram)
    out: list[tuple[int, ...]] = []
    x = [0] * n

    def descend(i: int, remaining: Fraction):
        center = -sum((mu[i][j] * x[j] for j in range(i + 1, n)), Fraction(0))
        for xi in _int_range(center, remaining / d[i]):
            x[i] = xi
            rest = remaining - d[i] * (xi - center) ** 2
            if i == 0:
                out.append(tuple(x))
            else:
                descend(i - 1, rest)
        x[i] = 0

    descend(n - 1, bound)
    zero = (0,) * n
    return [v for v in out if v != zero]


def _definite_sign(L: GramLattice) -> int:
    p, q = signature(L)
    if q == 0:
        return 1
    if p == 0:
        return -1
    raise DomainError(f"lattice of signature {(p, q)} is not definite")


def enumerate_definite(query: EnumerationQuery, radius_cap: int = DEFAULT_RADIUS_CAP,
                       rank_cap: int = DEFAULT_DEFINITE_RANK_CAP) -> list[LatticeVector]:
    """Every nonzero vector of the requested square meeting the constraints, sorted."""
    L = query.lattice
    if L.rank > rank_cap:
        raise CapacityError(f"rank {L.rank} exceeds the enumeration rank cap {rank_cap}",
                            cap="rank_cap", attempted=L.rank)
    s = _definite_sign(L)
    target = s * query.target_square
    if abs(target) > radius_cap:
        raise CapacityError(f"|target| = {abs(target)} exceeds the radius cap {radius_cap}",
                            cap="radius", attempted=abs(target))
    if target <= 0:
        return []
    gram = [[s * x for x in row] for row in L.gram]
    hits = []
    for v in short_vectors(gram, target):
        if intmat.dot(v, intmat.matvec(gram, v)) == target and query.admits(v):
            hits.append(v)
    return [LatticeVector(v, L) for v in sorted(hits)]


def majorant_gram(L: GramLattice, ell) -> list[list[Fraction]]:
    """Gram of M_ell(x) = 2 (x.ell)^2 / q(ell) - q(x), positive definite in signature (1, n)."""
    coords = ell.coords if isinstance(ell, LatticeVector) else tuple(ell)
    g = intmat.matvec(L.gram, coords)
    A = intmat.dot(coords, g)
    if A <= 0:
        raise DomainError("majorant needs a vector of positive square")
    n = L.rank
    return [[Fraction(2 * g[i] * g[j], A) - L.gram[i][j] for j in range(n)] for i in range(n)]


def separation_constant(A: int, B: int, AB: int) -> Fraction:
    """kappa with M_ell <= kappa * M_u for every u on the segment [ell, h].

    A = q(ell), B = q(h), AB = (ell.h).  The eigenvalue ratio of two majorants
    is exp(2 d) for their hyperbolic distance d, and exp(2 d) <= 4 cosh(d)^2.
    Distances from ell along the segment are at most d(ell, h).
    """
    return Fraction(4 * AB * AB, A * B)


def _check_hyperbolic(L: GramLattice):
    p, q = signature(L)
    if p != 1:
        raise DomainError(f"need signature (1, n), got {(p, q)}")


def wall_divisibility(v, pairing_matrix) -> int:
    return intmat.content_of(intmat.matvec(pairing_matrix, v))


def enumerate_separating_walls(L: GramLattice, ell: LatticeVector, h: LatticeVector,
                               walls: WallSpec, *, pairing_matrix=None,
                               radius_cap=DEFAULT_WALL_RADIUS_CAP, radius_scale=1,
                               rank_cap: int = DEFAULT_RANK_CAP) -> list[LatticeVector]:
    """Primitive wall classes E with (E.ell) > 0 >= (E.h), sorted by coordinates.

    ``pairing_matrix`` (rows = ambient pairings against the basis of L)
    switches divisibility to an ambient lattice; by default it is L's Gram.
    """
    _check_hyperbolic(L)
    if L.rank > rank_cap:
        raise CapacityError(f"rank {L.rank} exceeds the enumeration rank cap {rank_cap}",
                            cap="rank_cap", attempted=L.rank)
    G = L.gram
    gl = intmat.matvec(G, ell.coords)
    A = intmat.dot(gl, ell.coords)
    B = intmat.dot(intmat.matvec(G, h.coords), h.coords)
    AB = intmat.dot(gl, h.coords)
    if A <= 0 or B <= 0 or AB <= 0:
        raise DomainError("ell and h must have positive square and lie in the same positive cone component")
    if not walls.entries:
        return []
    P = G if pairing_matrix is None else pairing_matrix
    kappa = separation_constant(A, B, AB)
    radius = kappa * max(-s for s in walls.squares) * Fraction(radius_scale)
    if radius > radius_cap:
        raise CapacityError(f"separating-wall search radius {radius} exceeds the cap {radius_cap}; raise --radius",
                            cap="radius", attempted=radius)
    squares = set(walls.squares)
    hits = []
    for v in short_vectors(majorant_gram(L, ell), radius):
        gv = intmat.matvec(G, v)
        s = intmat.dot(gv, v)
        if s not in squares or intmat.dot(gv, ell.coords) <= 0 or intmat.dot(gv, h.coords) > 0:
            continue
        if intmat.content_of(v) != 1:
            continue
        if walls.match(s, wall_divisibility(v, P)) is not None:
            hits.append(v)
    return [LatticeVector(v, L) for v in sorted(hits)]
