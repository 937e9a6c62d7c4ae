"""Integral binary quadratic forms q(x, y) = a x^2 + 2b xy + c y^2.

Representations of a nonzero integer are finite in number for definite forms
and for forms of square discriminant, and are listed directly.  Indefinite
forms of non-square discriminant are handled through Gauss reduction cycles of
the classical triple (a, 2b, c): a primitive representation of m exists iff
some form (m, t, *) with t^2 = D (mod 4|m|) lies in the cycle of the form.

Matrices in this module are 4-tuples (p, q, r, s) meaning [[p, q], [r, s]],
acting on column vectors; ``f o g`` denotes the form v -> f(g v).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from math import gcd, isqrt

from . import intmat
from .arith import divisors, is_square, sign, square_divisors
from .certificates import Certificate, Decision
from .errors import CapacityError, CertificateError, DomainError, InternalError, OnWallError
from .lattice import GramLattice
from .walls import WallEntry, WallSpec

DEFAULT_MAX_TARGET = 10**6
MAX_CYCLE_LENGTH = 10**7
MAX_ORBIT_PERIOD = 10**6

_I = (1, 0, 0, 1)


def _mul(X, Y):
    p, q, r, s = X
    P, Q, R, S = Y
    return (p * P + q * R, p * Q + q * S, r * P + s * R, r * Q + s * S)


def _inv(X):
    p, q, r, s = X
    if p * s - q * r != 1:
        raise InternalError("expected a matrix of determinant 1")
    return (s, -q, -r, p)


def _apply(X, v):
    return (X[0] * v[0] + X[1] * v[1], X[2] * v[0] + X[3] * v[1])


def _act(f, X):
    """Classical triple of f o X."""
    a, B, c = f
    p, q, r, s = X
    return (a * p * p + B * p * r + c * r * r,
            2 * a * p * q + B * (p * s + q * r) + 2 * c * r * s,
            a * q * q + B * q * s + c * s * s)


def _as_tuple4(g):
    if len(g) == 4:
        return tuple(int(x) for x in g)
    (p, q), (r, s) = g
    return (int(p), int(q), int(r), int(s))


@dataclass(frozen=True)
class BinaryForm:
    a: int
    b: int
    c: int

    def __post_init__(self):
        for name in ("a", "b", "c"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, int):
                raise DomainError(f"form coefficient {name} must be an integer")
        if self.disc == 0:
            raise DomainError(f"form {self} is degenerate")

    @property
    def disc(self) -> int:
        return self.b * self.b - self.a * self.c

    @classmethod
    def from_lattice(cls, L: GramLattice) -> "BinaryForm":
        if L.rank != 2:
            raise DomainError(f"need a rank-2 lattice, got rank {L.rank}")
        (a, b), (_, c) = L.gram
        return cls(a, b, c)

    @classmethod
    def from_classical(cls, a: int, B: int, c: int) -> "BinaryForm":
        """Form a x^2 + B xy + c y^2; B must be even."""
        if B % 2:
            raise DomainError("the xy coefficient must be even")
        return cls(a, B // 2, c)

    @property
    def classical(self) -> tuple[int, int, int]:
        return (self.a, 2 * self.b, self.c)

    @property
    def gram(self) -> tuple:
        return ((self.a, self.b), (self.b, self.c))

    def lattice(self, label: str | None = None) -> GramLattice:
        return GramLattice(self.gram, label=label)

    def __call__(self, x: int, y: int) -> int:
        return self.a * x * x + 2 * self.b * x * y + self.c * y * y

    def pair(self, v, w) -> int:
        return self.a * v[0] * w[0] + self.b * (v[0] * w[1] + v[1] * w[0]) + self.c * v[1] * w[1]

    @property
    def is_definite(self) -> bool:
        return self.disc < 0

    @property
    def is_indefinite(self) -> bool:
        return self.disc > 0

    def transform(self, g) -> "BinaryForm":
        """The form f o g for an integer 2x2 matrix g."""
        a, B, c = _act(self.classical, _as_tuple4(g))
        return BinaryForm(a, B // 2, c)

    def opposite(self) -> "BinaryForm":
        return BinaryForm(self.a, -self.b, self.c)

    def __str__(self):
        return f"({self.a}, {self.b}, {self.c})"


# -- reduction cycles ---------------------------------------------------------

def _rho(f, D, s0):
    a, B, c = f
    ac = abs(c)
    if ac > s0:
        r = (-B) % (2 * ac)
        if r > ac:
            r -= 2 * ac
    else:
        r = s0 - (s0 + B) % (2 * ac)
    s = (r + B) // (2 * c)
    return (c, r, (r * r - D) // (4 * c)), (0, -1, 1, s)


def is_reduced(f, s0: int) -> bool:
    a, B, _ = f
    return 0 < B <= s0 and 2 * abs(a) + B > s0 and 2 * abs(a) - B <= s0


def reduce_classical(f):
    """Return (reduced triple, gamma) with f o gamma equal to the reduced triple."""
    a, B, c = f
    D = B * B - 4 * a * c
    if D <= 0 or is_square(D):
        raise DomainError("cycle reduction needs a positive non-square discriminant")
    s0 = isqrt(D)
    g, M = f, _I
    steps = 0
    while not is_reduced(g, s0):
        g, R = _rho(g, D, s0)
        M = _mul(M, R)
        steps += 1
        if steps > MAX_CYCLE_LENGTH:
            raise InternalError("reduction did not terminate")
    return g, M


class _Cycle:
    __slots__ = ("forms", "mats", "index", "automorph", "key")

    def __init__(self, forms, mats, automorph):
        self.forms = forms
        self.mats = mats
        self.index = {g: i for i, g in enumerate(forms)}
        self.automorph = automorph
        self.key = min(forms)


_CYCLES: dict = {}


def _cycle_of(red) -> _Cycle:
    cyc = _CYCLES.get(red)
    if cyc is not None:
        return cyc
    a, B, c = red
    D = B * B - 4 * a * c
    s0 = isqrt(D)
    forms, mats = [red], [_I]
    g, M = red, _I
    while True:
        g, R = _rho(g, D, s0)
        M = _mul(M, R)
        if g == red:
            break
        forms.append(g)
        mats.append(M)
        if len(forms) > MAX_CYCLE_LENGTH:
            raise CapacityError("reduction cycle too long", cap="cycle_length", attempted=len(forms))
    cyc = _Cycle(forms, mats, M)
    for g in forms:
        _CYCLES.setdefault(g, cyc)
    return cyc


def _locate(f: BinaryForm):
    """(cycle, base) where base = gamma_f C_i^-1, so f = forms[0] o base^-1."""
    red, gam = reduce_classical(f.classical)
    cyc = _cycle_of(red)
    i = cyc.index[red]
    return cyc, _mul(gam, _inv(cyc.mats[i]))


def reduction_cycle(f: BinaryForm) -> list[tuple[int, int, int]]:
    """The reduced classical triples in the proper class of f, in cycle order."""
    cyc, _ = _locate(f)
    k = cyc.forms.index(cyc.key)
    return cyc.forms[k:] + cyc.forms[:k]


def cycle_key(f: BinaryForm) -> tuple[int, int, int]:
    """Proper-equivalence invariant: the least reduced triple in the cycle."""
    return _locate(f)[0].key


def class_key(f: BinaryForm) -> tuple:
    """GL2(Z)-equivalence invariant (proper or improper)."""
    return min(cycle_key(f), cycle_key(f.opposite()))


def properly_equivalent(f: BinaryForm, g: BinaryForm) -> bool:
    return f.disc == g.disc and cycle_key(f) == cycle_key(g)


def automorph(f: BinaryForm):
    """Generator of the proper automorphs of f modulo -1, as a 2x2 nested tuple."""
    if not f.is_indefinite or is_square(f.disc):
        raise DomainError("automorph needs an indefinite form of non-square discriminant")
    cyc, base = _locate(f)
    X = _mul(_mul(base, cyc.automorph), _inv(base))
    if f.transform(X) != f:
        raise InternalError("cycle product is not an automorph")
    return ((X[0], X[1]), (X[2], X[3]))


@lru_cache(maxsize=4096)
def _candidates(D: int, m: int):
    """(t, reduced form, gamma) for each t mod 2|m| with t^2 = D mod 4|m|."""
    M4 = 4 * abs(m)
    out = []
    for t in range(D % 2, 2 * abs(m), 2):
        if (t * t - D) % M4 == 0:
            g = (m, t, (t * t - D) // (4 * m))
            red, gam = reduce_classical(g)
            out.append((t, red, gam))
    return tuple(out)


# -- finite solution sets ---------------------------------------------------------

def _definite_solutions(f: BinaryForm, m: int) -> list[tuple[int, int]]:
    a, b, c = f.a, f.b, f.c
    if a < 0:
        a, b, c, m = -a, -b, -c, -m
    if m <= 0:
        return []
    D0 = a * c - b * b
    Y = isqrt(a * m // D0)
    sols = set()
    for y in range(-Y, Y + 1):
        R = a * m - D0 * y * y
        if R < 0:
            continue
        s = isqrt(R)
        if s * s != R:
            continue
        for u in {s, -s}:
            num = u - b * y
            if num % a == 0:
                sols.add((num // a, y))
    return sorted(sols)


def _square_disc_solutions(f: BinaryForm, m: int) -> list[tuple[int, int]]:
    a, b, c = f.a, f.b, f.c
    r = isqrt(f.disc)
    sols = set()
    if a == 0:
        # q = y (2b x + c y)
        for d in divisors(m):
            for y in (d, -d):
                rem = m // y - c * y
                if rem % (2 * b) == 0:
                    sols.add((rem // (2 * b), y))
    else:
        # a q = (a x + (b - r) y) (a x + (b + r) y)
        N = a * m
        for d in divisors(N):
            for u in (d, -d):
                v = N // u
                if (v - u) % (2 * r):
                    continue
                y = (v - u) // (2 * r)
                num = u - (b - r) * y
                if num % a == 0:
                    sols.add((num // a, y))
    return sorted(s for s in sols if f(*s) == m)


def _finite_method(f: BinaryForm) -> str | None:
    if f.is_definite:
        return "definite_enumeration"
    if is_square(f.disc):
        return "factorization"
    return None


@dataclass(frozen=True)
class PrimitiveClasses:
    """Primitive representations of m.

    When ``finite`` is true, ``witnesses`` lists every primitive solution.
    Otherwise it holds one representative per orbit of the proper automorph
    group, and ``residues``/``reduced`` record the candidate forms examined.
    """

    target: int
    finite: bool
    witnesses: tuple
    method: str
    residues: tuple = ()
    reduced: tuple = ()


def primitive_representations(f: BinaryForm, m: int) -> PrimitiveClasses:
    if m == 0:
        raise DomainError("use has_isotropic_vector for the target 0")
    method = _finite_method(f)
    if method == "definite_enumeration":
        sols = _definite_solutions(f, m)
    elif method == "factorization":
        sols = _square_disc_solutions(f, m)
    else:
        return _cycle_classes(f, m)
    prim = tuple(s for s in sols if gcd(*s) == 1)
    return PrimitiveClasses(m, True, prim, method)


def _cycle_classes(f: BinaryForm, m: int) -> PrimitiveClasses:
    D = 4 * f.disc
    cyc, base = _locate(f)
    wits, residues, reduced = [], [], []
    for t, red, gam in _candidates(D, m):
        residues.append(t)
        reduced.append(list(red))
        j = cyc.index.get(red)
        if j is None:
            continue
        v = _apply(_mul(_mul(base, cyc.mats[j]), _inv(gam)), (1, 0))
        if f(*v) != m:
            raise InternalError(f"cycle witness {v} does not represent {m}")
        wits.append(v)
    return PrimitiveClasses(m, False, tuple(wits), "reduction_cycle", tuple(residues), tuple(map(tuple, reduced)))


# -- public decisions ---------------------------------------------------------

def has_isotropic_vector(f: BinaryForm) -> Decision:
    d = f.disc
    if is_square(d):
        r = isqrt(d)
        if f.a == 0:
            v = (1, 0)
        else:
            x, y = -f.b + r, f.a
            g = gcd(x, y)
            v = (x // g, y // g)
            if v[1] < 0 or (v[1] == 0 and v[0] < 0):
                v = (-v[0], -v[1])
        cert = Certificate("witness", "isotropic", {"vector": list(v), "value": 0})
        return Decision(True, v, cert)
    r = isqrt(d) if d > 0 else None
    cert = Certificate("anisotropy", "anisotropic",
                       {"form": [f.a, f.b, f.c], "disc": d, "isqrt": r,
                        "reason": "disc is not a perfect square"})
    return Decision(False, None, cert)


def represents(f: BinaryForm, n: int, primitive: bool = False,
               max_target: int = DEFAULT_MAX_TARGET) -> Decision:
    """Decide whether f takes the value n (at a nonzero vector when n == 0)."""
    n = int(n)
    if abs(n) > max_target:
        raise CapacityError(f"|n| = {abs(n)} exceeds the configured bound {max_target}; raise max_target",
                            cap="max_target", attempted=abs(n))
    if n == 0:
        return has_isotropic_vector(f)
    levels = []
    scales = square_divisors(n) if not primitive else [1]
    for g in scales:
        pc = primitive_representations(f, n // (g * g))
        if pc.witnesses:
            v = (g * pc.witnesses[0][0], g * pc.witnesses[0][1])
            return Decision(True, v, Certificate("witness", f"represents {n}",
                                                 {"vector": list(v), "value": n}))
        level = {"scale": g, "target": pc.target, "method": pc.method}
        if not pc.finite:
            level["residues"] = list(pc.residues)
            level["reduced"] = [list(r) for r in pc.reduced]
        levels.append(level)
    data = {"form": [f.a, f.b, f.c], "target": n, "primitive": primitive, "levels": levels}
    if _finite_method(f) is None:
        data["cycle_key"] = list(cycle_key(f))
    return Decision(False, None, Certificate("nonrepresentation", f"does not represent {n}", data))


def check_certificate(f: BinaryForm, n: int, cert: Certificate | dict) -> bool:
    """Validate a certificate produced by ``represents``; raise CertificateError if it fails."""
    if isinstance(cert, dict):
        cert = Certificate.from_dict(cert)
    d = cert.data
    if cert.kind == "witness":
        v = tuple(d["vector"])
        if v == (0, 0) or f(*v) != n:
            raise CertificateError(f"witness {v} does not give {n}")
        return True
    if cert.kind == "anisotropy":
        r = d["isqrt"]
        if n != 0 or is_square(f.disc) or (r is not None and not (r * r < f.disc < (r + 1) ** 2)):
            raise CertificateError("anisotropy certificate does not match the form")
        return True
    if cert.kind != "nonrepresentation":
        raise CertificateError(f"unknown certificate kind {cert.kind!r}")
    if d.get("target") != n or list(d.get("form", [])) != [f.a, f.b, f.c]:
        raise CertificateError("certificate is for a different question")
    want = [1] if d.get("primitive") else square_divisors(n)
    got = [lv["scale"] for lv in d["levels"]]
    if got != want:
        raise CertificateError(f"scales {got} do not cover the square divisors {want}")
    D = 4 * f.disc
    for lv in d["levels"]:
        m = n // (lv["scale"] ** 2)
        if lv["target"] != m:
            raise CertificateError("level target mismatch", index=lv["scale"])
        if lv["method"] == "reduction_cycle":
            residues = [t for t in range(0, 2 * abs(m)) if (t * t - D) % (4 * abs(m)) == 0]
            if residues != list(lv["residues"]):
                raise CertificateError(f"residue list for target {m} is incomplete", index=lv["scale"])
            cyc, _ = _locate(f)
            for t, red in zip(residues, lv["reduced"]):
                g = (m, t, (t * t - D) // (4 * m))
                if tuple(red) != reduce_classical(g)[0] or tuple(red) in cyc.index:
                    raise CertificateError(f"candidate form for t = {t} is not excluded", index=lv["scale"])
        else:
            if primitive_representations(f, m).witnesses:
                raise CertificateError(f"target {m} is primitively represented", index=lv["scale"])
    return True


# -- wall classes and extremal rays ---------------------------------------------

@dataclass(frozen=True)
class DivisibilityRule:
    """How wall divisibility is measured for vectors of a rank-2 lattice.

    ``matrix`` has one row per ambient basis vector holding its pairings with
    the two basis vectors; the divisibility of v is the content of matrix * v.
    """

    matrix: tuple
    semantics: str = "picard"

    @classmethod
    def picard(cls, f: BinaryForm) -> "DivisibilityRule":
        return cls(f.gram, "picard")

    def div(self, v) -> int:
        return intmat.content_of(intmat.matvec(self.matrix, v))

    @cached_property
    def modulus(self) -> int:
        """div(v) for primitive v depends only on v modulo this number."""
        if self.semantics == "picard":
            return 1  # divisibility in the lattice itself is an isometry invariant
        ed = [d for d in intmat.elementary_divisors([list(r) for r in self.matrix]) if d]
        if len(ed) < 2:
            raise DomainError("embedding matrix must have rank 2")
        return ed[1] // ed[0]


def _orbit_period(X, e: int) -> int:
    if e == 1:
        return 1
    red = tuple(x % e for x in X)
    M, k = red, 1
    ident = tuple(x % e for x in _I)
    while M != ident:
        M = tuple(x % e for x in _mul(M, red))
        k += 1
        if k > MAX_ORBIT_PERIOD:
            raise CapacityError("automorph period modulo the divisibility modulus is too long",
                                cap="orbit_period", attempted=k)
    return k


def _matching_classes(f: BinaryForm, entry: WallEntry, rule: DivisibilityRule):
    """Representatives of every automorph orbit of primitive vectors matching entry.

    Returns (finite, reps, translation) where translation generates the
    stabiliser of the matching condition inside the proper automorphs.
    """
    pc = primitive_representations(f, entry.square)
    if pc.finite:
        return True, [v for v in pc.witnesses if entry.matches(entry.square, rule.div(v))], None
    tau = _as_tuple4(automorph(f))
    p = _orbit_period(tau, rule.modulus)
    reps = []
    for v in pc.witnesses:
        w = v
        for _ in range(p):
            if entry.matches(entry.square, rule.div(w)):
                reps.append(w)
            w = _apply(tau, w)
    step = _I
    for _ in range(p):
        step = _mul(step, tau)
    return False, reps, step


def find_wall_class(f: BinaryForm, walls: WallSpec, rule: DivisibilityRule | None = None):
    """First primitive vector matching a wall entry, or None; with a transcript."""
    rule = rule or DivisibilityRule.picard(f)
    transcript = []
    for entry in sorted(walls.entries, key=lambda e: (-e.square, e.div or 0)):
        _, reps, _ = _matching_classes(f, entry, rule)
        transcript.append({"square": entry.square, "div": entry.div if entry.div else "any",
                           "found": bool(reps)})
        if reps:
            return reps[0], entry, transcript
    return None, None, transcript


@dataclass(frozen=True)
class QuadraticSurd:
    """The direction orientation * (t, 1) with t = (p + q sqrt(radicand)) / den.

    t is a root of minpoly[0] t^2 + minpoly[1] t + minpoly[2].
    """

    minpoly: tuple
    p: int
    q: int
    radicand: int
    den: int
    orientation: int

    def approx(self) -> tuple[float, float]:
        t = (self.p + self.q * self.radicand ** 0.5) / self.den
        return (self.orientation * t, float(self.orientation))

    def to_dict(self) -> dict:
        return {"minpoly": list(self.minpoly), "p": self.p, "q": self.q,
                "radicand": self.radicand, "den": self.den, "orientation": self.orientation}


@dataclass(frozen=True)
class Ray:
    kind: str  # isotropic | irrational | wall_class | wall_orthogonal
    generator: tuple | None = None
    surd: QuadraticSurd | None = None

    def to_dict(self) -> dict:
        out = {"kind": self.kind}
        if self.generator is not None:
            out["generator"] = list(self.generator)
        if self.surd is not None:
            out["surd"] = self.surd.to_dict()
        return out

    def approx(self):
        return tuple(map(float, self.generator)) if self.generator else self.surd.approx()


@dataclass(frozen=True)
class SideRays:
    side: str
    boundary: Ray
    movable: Ray
    effective: Ray
    wall: tuple | None = None

    def to_dict(self) -> dict:
        return {"side": self.side, "boundary": self.boundary.to_dict(),
                "movable": self.movable.to_dict(), "effective": self.effective.to_dict(),
                "wall": list(self.wall) if self.wall else None}


@dataclass(frozen=True)
class ExtremalRays:
    lower: SideRays
    upper: SideRays

    def sides(self):
        return (self.lower, self.upper)


def _surd_sign(alpha, beta, d) -> int:
    """Sign of alpha + beta sqrt(d) for d > 0 not a square."""
    sa, sb = sign(alpha), sign(beta)
    if sb == 0 or sa == sb:
        return sa if sa else sb
    if sa == 0:
        return sb
    return sa if alpha * alpha > beta * beta * d else sb


def orientation(ell, r) -> int:
    """Which side of ell the vector r lies on (for r in the half-plane r.ell > 0)."""
    return sign(ell[0] * r[1] - ell[1] * r[0])


def _primitive(v):
    g = gcd(*v)
    return (v[0] // g, v[1] // g)


def boundary_rays(f: BinaryForm, ell) -> dict[int, Ray]:
    """The two boundary rays of the positive cone component containing ell, keyed by side."""
    out = {}
    d = f.disc
    gl = (f.a * ell[0] + f.b * ell[1], f.b * ell[0] + f.c * ell[1])
    if is_square(d):
        r = isqrt(d)
        if f.a == 0:
            dirs = [(1, 0), (f.c, -2 * f.b)]
        else:
            dirs = [(-f.b + r, f.a), (-f.b - r, f.a)]
        for v in dirs:
            v = _primitive(v)
            if gl[0] * v[0] + gl[1] * v[1] < 0:
                v = (-v[0], -v[1])
            out[orientation(ell, v)] = Ray("isotropic", v)
        return out
    a, b = f.a, f.b
    for eps in (1, -1):
        # t = (-b + eps sqrt(d)) / a ; pairing with ell has sign of (alpha + beta sqrt d) / a
        sigma = _surd_sign(-gl[0] * b + gl[1] * a, eps * gl[0], d) * sign(a)
        side = sigma * _surd_sign(ell[0] * a + ell[1] * b, -ell[1] * eps, d) * sign(a)
        p, q, den = -b, eps, a
        if den < 0:
            p, q, den = -p, -q, -den
        out[side] = Ray("irrational", surd=QuadraticSurd((a, 2 * b, f.c), p, q, d, den, sigma))
    return out


def _wall_perp(f: BinaryForm, E, ell):
    gE = (f.a * E[0] + f.b * E[1], f.b * E[0] + f.c * E[1])
    p = _primitive((-gE[1], gE[0]))
    if f.pair(p, ell) < 0:
        p = (-p[0], -p[1])
    return p


def _signed_position(f: BinaryForm, E, ell) -> Fraction:
    """Monotone in the signed distance from ell to the wall of E (E oriented E.ell > 0)."""
    El = f.pair(E, ell)
    return orientation(ell, _wall_perp(f, E, ell)) * Fraction(El * El, -f(*E))


def _orient_pos(f, v, ell):
    return v if f.pair(v, ell) > 0 else (-v[0], -v[1])


def nearest_walls(f: BinaryForm, ell, walls: WallSpec, rule: DivisibilityRule | None = None):
    """Nearest wall class on each side of ell: {side: E}, E primitive with E.ell > 0."""
    rule = rule or DivisibilityRule.picard(f)
    best: dict[int, tuple[Fraction, tuple]] = {}

    def offer(E):
        if f.pair(E, ell) == 0:
            raise OnWallError(f"ample class {tuple(ell)} lies on the wall of {E}")
        E = _orient_pos(f, E, ell)
        pos = _signed_position(f, E, ell)
        side = sign(pos)
        key = abs(pos)
        if side not in best or key < best[side][0] or (key == best[side][0] and E < best[side][1]):
            best[side] = (key, E)

    for entry in walls.entries:
        finite, reps, step = _matching_classes(f, entry, rule)
        if finite:
            for v in reps:
                offer(v)
            continue
        step_inv = _inv(step)
        for v in reps:
            # walls of one orbit sit at evenly spaced points of a line; walk to the pair straddling ell
            w0 = _orient_pos(f, v, ell)
            if f.pair(w0, ell) == 0:
                offer(w0)
            p0 = _signed_position(f, w0, ell)
            w1 = _orient_pos(f, _apply(step, w0), ell)
            fwd = step if _signed_position(f, w1, ell) > p0 else step_inv
            bwd = _inv(fwd)
            move = bwd if p0 > 0 else fwd
            w = w0
            for _ in range(MAX_CYCLE_LENGTH):
                nxt = _orient_pos(f, _apply(move, w), ell)
                if f.pair(nxt, ell) == 0:
                    offer(nxt)
                if sign(_signed_position(f, nxt, ell)) != sign(_signed_position(f, w, ell)):
                    offer(w)
                    offer(nxt)
                    break
                w = nxt
            else:
                raise InternalError("wall orbit walk did not cross the ample class")
    return {side: E for side, (_, E) in best.items()}


def extremal_rays(f: BinaryForm, ell, walls: WallSpec | None = None,
                  rule: DivisibilityRule | None = None) -> ExtremalRays:
    """Boundary, movable and effective rays on both sides of the ample class ell."""
    ell = tuple(ell)
    if not f.is_indefinite:
        raise DomainError("extremal rays need a form of signature (1, 1)")
    if f(*ell) <= 0:
        raise DomainError(f"ell = {ell} does not have positive square")
    bounds = boundary_rays(f, ell)
    near = nearest_walls(f, ell, walls, rule) if walls is not None else {}
    sides = {}
    for s, name in ((-1, "lower"), (1, "upper")):
        bd = bounds[s]
        if s in near:
            E = near[s]
            sides[name] = SideRays(name, bd, Ray("wall_orthogonal", _wall_perp(f, E, ell)),
                                   Ray("wall_class", E), E)
        else:
            sides[name] = SideRays(name, bd, bd, bd)
    return ExtremalRays(sides["lower"], sides["upper"])
