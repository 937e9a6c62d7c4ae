"""Even lattices given by integer Gram matrices, and the structural operations on them."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from . import intmat
from .errors import DomainError, InternalError


@dataclass(frozen=True)
class GramLattice:
    """A free Z-module with a non-degenerate symmetric integer bilinear form.

    ``u_planes`` optionally designates orthogonal hyperbolic summands: each
    entry is a pair of coordinate indices ``(i, j)`` such that the basis
    vectors ``e_i, e_j`` span a copy of U orthogonal to every other basis
    vector.  Constructors that need an explicit ``U^3 + T`` splitting read it
    from here.
    """

    gram: tuple
    label: str | None = None
    u_planes: tuple = ()

    def __post_init__(self):
        g = tuple(tuple(int(x) for x in row) for row in self.gram)
        object.__setattr__(self, "gram", g)
        object.__setattr__(self, "u_planes", tuple(tuple(int(i) for i in p) for p in self.u_planes))
        n = len(g)
        if any(len(row) != n for row in g):
            raise DomainError("Gram matrix must be square")
        if any(g[i][j] != g[j][i] for i in range(n) for j in range(i)):
            raise DomainError("Gram matrix must be symmetric")
        if n and intmat.det(g) == 0:
            raise DomainError("Gram matrix is degenerate")
        used = set()
        for plane in self.u_planes:
            if len(plane) != 2:
                raise DomainError("u_planes entries are index pairs")
            i, j = plane
            if not (0 <= i < n and 0 <= j < n) or i == j or {i, j} & used:
                raise DomainError(f"bad hyperbolic plane indices {plane}")
            used |= {i, j}
            if g[i][i] or g[j][j] or g[i][j] != 1:
                raise DomainError(f"coordinates {plane} do not span a hyperbolic plane")
            if any(g[i][k] or g[j][k] for k in range(n) if k not in (i, j)):
                raise DomainError(f"hyperbolic plane {plane} is not an orthogonal summand")

    @property
    def rank(self) -> int:
        return len(self.gram)

    @cached_property
    def det(self) -> int:
        return intmat.det(self.gram)

    @property
    def is_even(self) -> bool:
        return all(self.gram[i][i] % 2 == 0 for i in range(self.rank))

    def vector(self, coords) -> "LatticeVector":
        return LatticeVector(tuple(coords), self)

    def basis_vector(self, i: int) -> "LatticeVector":
        return LatticeVector(tuple(int(k == i) for k in range(self.rank)), self)

    def zero_vector(self) -> "LatticeVector":
        return LatticeVector((0,) * self.rank, self)

    def matrix(self) -> list[list[int]]:
        return [list(row) for row in self.gram]

    def __str__(self):
        return self.label or f"GramLattice(rank={self.rank})"


@dataclass(frozen=True)
class LatticeVector:
    coords: tuple
    home: GramLattice = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(int(x) for x in self.coords))
        if len(self.coords) != self.home.rank:
            raise DomainError(
                f"vector of length {len(self.coords)} in a lattice of rank {self.home.rank}")

    def _check(self, other):
        if not isinstance(other, LatticeVector) or not same_lattice(self.home, other.home):
            raise DomainError("vectors live in different lattices")

    def __add__(self, other):
        self._check(other)
        return LatticeVector(tuple(a + b for a, b in zip(self.coords, other.coords)), self.home)

    def __sub__(self, other):
        self._check(other)
        return LatticeVector(tuple(a - b for a, b in zip(self.coords, other.coords)), self.home)

    def __neg__(self):
        return LatticeVector(tuple(-a for a in self.coords), self.home)

    def __mul__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        return LatticeVector(tuple(k * a for a in self.coords), self.home)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not any(self.coords)

    @property
    def square(self) -> int:
        return pair(self, self)

    def __iter__(self):
        return iter(self.coords)

    def __len__(self):
        return len(self.coords)


def same_lattice(L1: GramLattice, L2: GramLattice) -> bool:
    return L1 is L2 or L1.gram == L2.gram


@dataclass(frozen=True)
class Sublattice:
    ambient: GramLattice
    basis: tuple

    def __post_init__(self):
        vecs = []
        for b in self.basis:
            if isinstance(b, LatticeVector):
                if not same_lattice(b.home, self.ambient):
                    raise DomainError("basis vector from a different lattice")
                vecs.append(LatticeVector(b.coords, self.ambient))
            else:
                vecs.append(LatticeVector(tuple(b), self.ambient))
        object.__setattr__(self, "basis", tuple(vecs))
        if vecs and intmat.rank([list(v.coords) for v in vecs]) != len(vecs):
            raise DomainError("sublattice basis is linearly dependent")

    @property
    def rank(self) -> int:
        return len(self.basis)

    def rows(self) -> list[list[int]]:
        return [list(v.coords) for v in self.basis]

    @cached_property
    def gram(self) -> tuple:
        return tuple(tuple(pair(u, v) for v in self.basis) for u in self.basis)

    def as_lattice(self, label: str | None = None) -> GramLattice:
        return GramLattice(self.gram, label=label)

    def contains(self, v: LatticeVector) -> bool:
        """Membership of an ambient vector in the Z-span of the basis."""
        coeffs = self.coordinates_of(v)
        return coeffs is not None and all(c.denominator == 1 for c in coeffs)

    def coordinates_of(self, v: LatticeVector):
        """Rational coefficients of v in this basis, or None if v is outside the Q-span."""
        if not self.basis:
            return [] if v.is_zero() else None
        A = intmat.transpose(self.rows())
        return intmat.solve_rational(A, list(v.coords))

    def lift(self, coeffs) -> LatticeVector:
        """Ambient vector with the given integer coordinates in this basis."""
        out = [0] * self.ambient.rank
        for c, b in zip(coeffs, self.basis):
            for i, x in enumerate(b.coords):
                out[i] += int(c) * x
        return LatticeVector(tuple(out), self.ambient)


@dataclass(frozen=True)
class DiscriminantGroup:
    cyclic_factors: tuple

    @property
    def order(self) -> int:
        out = 1
        for d in self.cyclic_factors:
            out *= d
        return out

    @property
    def is_trivial(self) -> bool:
        return not self.cyclic_factors

    def __str__(self):
        if not self.cyclic_factors:
            return "0"
        return " + ".join(f"Z/{d}" for d in self.cyclic_factors)


# -- pairings -----------------------------------------------------------------

def pair(v: LatticeVector, w: LatticeVector) -> int:
    if not same_lattice(v.home, w.home):
        raise DomainError("vectors live in different lattices")
    G = v.home.gram
    total = 0
    for i, x in enumerate(v.coords):
        if x:
            row = G[i]
            total += x * sum(g * y for g, y in zip(row, w.coords))
    return total


def square(v: LatticeVector) -> int:
    return pair(v, v)


def pairing_vector(v: LatticeVector) -> list[int]:
    """Gram * coords: the functional x -> (v, x) in dual coordinates."""
    return intmat.matvec(v.home.gram, v.coords)


def divisibility(v: LatticeVector) -> int:
    if v.is_zero():
        raise DomainError("divisibility of the zero vector is undefined")
    return intmat.content_of(pairing_vector(v))


def is_primitive(v: LatticeVector) -> bool:
    if v.is_zero():
        raise DomainError("primitivity of the zero vector is undefined")
    return intmat.content_of(v.coords) == 1


def primitive_part(v: LatticeVector) -> LatticeVector:
    g = intmat.content_of(v.coords)
    if g == 0:
        raise DomainError("zero vector has no primitive part")
    return LatticeVector(tuple(x // g for x in v.coords), v.home)


# -- signature ----------------------------------------------------------------

def congruence_diagonalization(gram):
    """Return (diag, P) with P^T * gram * P == diag(diag) over Q.

    Symmetric Gaussian elimination; zero pivots are repaired by adding a
    partner row/column, which keeps the transformation a congruence.
    """
    n = len(gram)
    A = [[Fraction(x) for x in row] for row in gram]
    P = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    diag = []
    for k in range(n):
        p = next((i for i in range(k, n) if A[i][i] != 0), None)
        if p is None:
            pr = next(((i, j) for i in range(k, n) for j in range(i + 1, n) if A[i][j] != 0), None)
            if pr is None:
                raise DomainError("form is degenerate")
            i, j = pr
            # x_i <- x_i + x_j  makes A[i][i] = 2 A[i][j] != 0
            for r in range(n):
                A[r][i] += A[r][j]
            for c in range(n):
                A[i][c] += A[j][c]
            for r in range(n):
                P[r][i] += P[r][j]
            p = i
        if p != k:
            A[k], A[p] = A[p], A[k]
            for row in A:
                row[k], row[p] = row[p], row[k]
            for row in P:
                row[k], row[p] = row[p], row[k]
        piv = A[k][k]
        diag.append(piv)
        for i in range(k + 1, n):
            f = A[i][k] / piv
            if f:
                for j in range(k, n):
                    A[i][j] -= f * A[k][j]
                for j in range(k, n):
                    A[j][i] = A[i][j]
                for r in range(n):
                    P[r][i] -= f * P[r][k]
    return diag, P


def signature(L: GramLattice) -> tuple[int, int]:
    diag, _ = congruence_diagonalization(L.gram)
    return sum(1 for d in diag if d > 0), sum(1 for d in diag if d < 0)


# -- constructions ------------------------------------------------------------

def rescale(L: GramLattice, k: int) -> GramLattice:
    if k == 0:
        raise DomainError("rescaling factor must be nonzero")
    if k == 1:
        return L
    label = f"{L.label}({k})" if L.label else None
    return GramLattice(tuple(tuple(k * x for x in row) for row in L.gram), label=label)


def direct_sum(L1: GramLattice, L2: GramLattice, label: str | None = None) -> GramLattice:
    n1, n2 = L1.rank, L2.rank
    rows = [list(r) + [0] * n2 for r in L1.gram] + [[0] * n1 + list(r) for r in L2.gram]
    planes = L1.u_planes + tuple((i + n1, j + n1) for i, j in L2.u_planes)
    if label is None and L1.label and L2.label:
        label = f"{L1.label} + {L2.label}"
    elif label is None:
        label = L1.label if n2 == 0 else (L2.label if n1 == 0 else None)
    return GramLattice(tuple(map(tuple, rows)), label=label, u_planes=planes)


def zero_lattice() -> GramLattice:
    return GramLattice((), label="0")


def discriminant_group(L: GramLattice) -> DiscriminantGroup:
    if L.rank and L.det == 0:
        raise DomainError("form is degenerate")
    if L.rank == 0:
        return DiscriminantGroup(())
    return DiscriminantGroup(tuple(d for d in intmat.elementary_divisors(L.gram) if d > 1))


def saturation(S: Sublattice) -> Sublattice:
    if S.rank == 0:
        return S
    return Sublattice(S.ambient, tuple(map(tuple, intmat.saturate_rows(S.rows()))))


def is_saturated(S: Sublattice) -> bool:
    sat = saturation(S)
    return all(S.contains(v) for v in sat.basis)


def orthogonal_complement(S: Sublattice) -> Sublattice:
    L = S.ambient
    if S.rank == 0:
        return Sublattice(L, tuple(tuple(r) for r in intmat.identity(L.rank)))
    functionals = [pairing_vector(v) for v in S.basis]
    return Sublattice(L, tuple(map(tuple, intmat.integer_kernel(functionals))))


def span(vectors) -> Sublattice:
    vectors = list(vectors)
    if not vectors:
        raise DomainError("empty span needs an ambient lattice")
    return Sublattice(vectors[0].home, tuple(vectors))


# -- isometries ---------------------------------------------------------------

def is_isometry(L: GramLattice, T) -> bool:
    if abs(intmat.det(T)) != 1:
        return False
    return intmat.matmul(intmat.matmul(intmat.transpose(T), L.matrix()), T) == L.matrix()


def apply(T, v: LatticeVector) -> LatticeVector:
    return LatticeVector(tuple(intmat.matvec(T, v.coords)), v.home)


def eichler_transvection(e: LatticeVector, a: LatticeVector) -> list[list[int]]:
    """Matrix of x -> x + (x,e)a - (x,a)e - (a,a)/2 (x,e)e acting on column coordinates."""
    L = e.home
    if not same_lattice(L, a.home):
        raise DomainError("vectors live in different lattices")
    if not L.is_even:
        raise DomainError("transvections need an even lattice")
    if square(e) != 0:
        raise DomainError("e must be isotropic")
    if pair(e, a) != 0:
        raise DomainError("a must be orthogonal to e")
    half = square(a) // 2
    cols = []
    for j in range(L.rank):
        x = L.basis_vector(j)
        xe, xa = pair(x, e), pair(x, a)
        cols.append([x.coords[i] + xe * a.coords[i] - xa * e.coords[i] - half * xe * e.coords[i]
                     for i in range(L.rank)])
    return intmat.transpose(cols)


def orientation_character(L: GramLattice, T) -> int:
    """+1 if the isometry T keeps the orientation of maximal positive definite subspaces.

    Computed as the sign of det(P+^T G T P+) for an orthogonal positive frame P+.
    The +1 / -1 convention follows the usual spinor-free definition of the
    orientation-preserving subgroup; it is a utility and is not used by any
    decision procedure.
    """
    if not is_isometry(L, T):
        raise DomainError("T is not an isometry of L")
    diag, P = congruence_diagonalization(L.gram)
    pos = [k for k, d in enumerate(diag) if d > 0]
    if not pos:
        return 1
    G = L.matrix()
    GT = intmat.matmul(G, T)
    cols = [[P[r][k] for r in range(L.rank)] for k in pos]
    M = [[intmat.dot(ci, intmat.matvec(GT, cj)) for cj in cols] for ci in cols]
    d = _fraction_det(M)
    return 1 if d > 0 else -1


def _fraction_det(M) -> Fraction:
    n = len(M)
    A = [[Fraction(x) for x in row] for row in M]
    d = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if A[r][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            A[c], A[p] = A[p], A[c]
            d = -d
        d *= A[c][c]
        for r in range(c + 1, n):
            f = A[r][c] / A[c][c]
            if f:
                A[r] = [x - f * y for x, y in zip(A[r], A[c])]
    return d


# -- hyperbolic planes in <l, a>^perp -----------------------------------------

def _nearest_quotient(a: int, b: int) -> int:
    q, r = divmod(a, b)
    if 2 * abs(r) > abs(b):
        q += 1 if (r > 0) == (b > 0) else -1
    return q


def _diagonalize_2x2(X):
    """P, Q in SL_2(Z) with P X Q diagonal (no divisibility normalisation)."""
    X = [list(r) for r in X]
    P = [[1, 0], [0, 1]]
    Q = [[1, 0], [0, 1]]
    while X[0][1] or X[1][0]:
        while X[0][1]:
            if X[0][0]:
                q = _nearest_quotient(X[0][1], X[0][0])
                for M in (X, Q):
                    for r in M:
                        r[1] -= q * r[0]
            if X[0][1]:
                # (c0, c1) -> (c1, -c0) has determinant 1
                for M in (X, Q):
                    for r in M:
                        r[0], r[1] = r[1], -r[0]
        while X[1][0]:
            if X[0][0]:
                q = _nearest_quotient(X[1][0], X[0][0])
                for M in (X, P):
                    M[1] = [b - q * a for a, b in zip(M[0], M[1])]
            if X[1][0]:
                for M in (X, P):
                    M[0], M[1] = M[1], [-a for a in M[0]]
    return P, Q


def _u2_isometry(x_i, x_j):
    """Isometry of U_i + U_j moving x into U_i.

    Coordinates are (alpha_i, beta_i, alpha_j, beta_j) with alpha the e- and
    beta the f-coefficient.  U + U is identified with (M_2(Z), 2 det) via
    X = [[alpha_i, alpha_j], [-beta_j, beta_i]]; X -> P X Q with P, Q in
    SL_2(Z) is an isometry, and making X diagonal kills the U_j part.
    Returns a 4x4 integer matrix acting on column coordinates.
    """
    ai, bi = x_i
    aj, bj = x_j
    P, Q = _diagonalize_2x2([[ai, aj], [-bj, bi]])

    def to_mat(c):
        a_i, b_i, a_j, b_j = c
        return [[a_i, a_j], [-b_j, b_i]]

    def from_mat(Y):
        return [Y[0][0], Y[1][1], Y[0][1], -Y[1][0]]

    cols = []
    for k in range(4):
        c = [int(k == t) for t in range(4)]
        cols.append(from_mat(intmat.matmul(intmat.matmul(P, to_mat(c)), Q)))
    return intmat.transpose(cols)


def _embed(block, positions, n):
    """Extend a block acting on the given coordinates by the identity elsewhere."""
    T = intmat.identity(n)
    for r, pr in enumerate(positions):
        for c, pc in enumerate(positions):
            T[pr][pc] = block[r][c]
    return T


def hyperbolic_complement(M: GramLattice, ell: LatticeVector, a: LatticeVector) -> Sublattice:
    """A copy of U inside <ell, a>^perp, for M = U^3 + T even with ell primitive.

    The first hyperbolic plane of M already orthogonal to both vectors is
    returned when one exists.  Otherwise isometries of U^3 (extended by the
    identity on T) move the U^3-component of ell into U_1 and then the
    U_2 + U_3 component of the image of a into U_2, so that the pull-back of
    U_3 works.
    """
    if not same_lattice(ell.home, M) or not same_lattice(a.home, M):
        raise DomainError("vectors must live in M")
    if not M.is_even:
        raise DomainError("M must be even")
    if len(M.u_planes) < 3:
        raise DomainError("M needs an explicit orthogonal U^3 summand (u_planes)")
    if ell.is_zero() or not is_primitive(ell):
        raise DomainError("ell must be primitive")
    ell = LatticeVector(ell.coords, M)
    a = LatticeVector(a.coords, M)

    for i, j in M.u_planes:
        e, f = M.basis_vector(i), M.basis_vector(j)
        if pair(ell, e) == pair(ell, f) == pair(a, e) == pair(a, f) == 0:
            return Sublattice(M, (e, f))

    planes = M.u_planes[:3]
    n = M.rank

    def comps(v, idx):
        return [v.coords[planes[idx][0]], v.coords[planes[idx][1]]]

    # move ell's U^3 part into U_1
    T = intmat.identity(n)
    for (i, j) in ((1, 2), (0, 1)):
        cur = apply(T, ell)
        block = _u2_isometry(comps(cur, i), comps(cur, j))
        T = intmat.matmul(_embed(block, [*planes[i], *planes[j]], n), T)
    # move the U_2 + U_3 part of a into U_2 (fixes U_1)
    cur = apply(T, a)
    block = _u2_isometry(comps(cur, 1), comps(cur, 2))
    T = intmat.matmul(_embed(block, [*planes[1], *planes[2]], n), T)

    Tinv = intmat.inverse_unimodular(T)
    u = apply(Tinv, M.basis_vector(planes[2][0]))
    v = apply(Tinv, M.basis_vector(planes[2][1]))
    ok = (square(u) == 0 and square(v) == 0 and pair(u, v) == 1
          and pair(u, ell) == pair(v, ell) == pair(u, a) == pair(v, a) == 0)
    if not ok:
        raise InternalError("hyperbolic plane construction failed verification")
    return Sublattice(M, (u, v))
