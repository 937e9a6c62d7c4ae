"""Rank-2 sublattices with no isotropic vectors and no small negative squares.

Given an even lattice M = U^3 + T, a primitive class ell with A = ell^2 > 0
and a second class a, the construction picks a hyperbolic plane U orthogonal
to both, a non-square multiple m of m1(A, N), the vector h = e + (Am/2) f of
U, and the lattice L = <ell, w> with w = (m A^2 n) a + h.  In the basis
(ell, w') with w' = (m A n) b + h and b = A a - (ell.a) ell the form is
diagonal, A x^2 + C y^2 with C = A m (m A n^2 b^2 + 1), and every square
-i with 0 <= i <= N is excluded by elementary congruences recorded in the
certificate.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import isqrt

from . import intmat
from .arith import factorize, is_square
from .bruteforce import find_value
from .cones import ConeReport, rank2_cone_report
from .errors import CertificateError, DomainError
from .forms import BinaryForm, represents
from .lattice import (GramLattice, LatticeVector, Sublattice, hyperbolic_complement, is_primitive,
                      pair, square)
from .walls import WallEntry, WallSpec

CERT_SCHEMA = "hklattice.avoidance/1"
DEFAULT_BOX = 1000
DEFAULT_N_CAP = 64
RESIDUE_TRACE = {"modulus": 4, "squares": [0, 1], "target": 3}


def Q(d: int) -> int:
    """Least square multiple of d built prime by prime: prod p^(2 ceil(v_p(d)/2))."""
    if not isinstance(d, int) or d <= 0:
        raise DomainError("Q(d) needs d >= 1")
    out = 1
    for p, e in factorize(d).items() if d > 1 else ():
        out *= p ** (2 * ((e + 1) // 2))
    return out


def m1(A: int, N: int) -> int:
    if A < 1:
        raise DomainError("A must be positive")
    if N < 0:
        raise DomainError("N must be nonnegative")
    out = 4
    for d in range(1, N // A + 1):
        out *= Q(d)
    return out


def choose_m(A: int, N: int) -> int:
    base = m1(A, N)
    k = 1
    while is_square(k * base):
        k += 1
    return k * base


@dataclass(frozen=True)
class SchifoParams:
    M: GramLattice
    ell: LatticeVector
    a: LatticeVector
    N: int
    m: int | None = None
    n: int | None = None

    def __post_init__(self):
        ell = LatticeVector(self.ell.coords if isinstance(self.ell, LatticeVector) else self.ell, self.M)
        a = LatticeVector(self.a.coords if isinstance(self.a, LatticeVector) else self.a, self.M)
        object.__setattr__(self, "ell", ell)
        object.__setattr__(self, "a", a)
        if not self.M.is_even:
            raise DomainError("M must be even")
        if ell.is_zero() or not is_primitive(ell):
            raise DomainError("ell must be primitive")
        if square(ell) <= 0:
            raise DomainError("ell must have positive square")
        if intmat.rank([list(ell.coords), list(a.coords)]) != 2:
            raise DomainError("a must not be proportional to ell")
        if not isinstance(self.N, int) or self.N < 0:
            raise DomainError("N must be a nonnegative integer")
        if self.m is not None:
            if self.m <= 0 or self.m % m1(self.A, self.N) or is_square(self.m):
                raise DomainError(f"m = {self.m} must be a positive non-square multiple of m1 = {m1(self.A, self.N)}")
        if self.n is not None and self.n < 0:
            raise DomainError("n must be nonnegative")

    @property
    def A(self) -> int:
        return square(self.ell)

    @property
    def m_value(self) -> int:
        return self.m if self.m is not None else choose_m(self.A, self.N)


def hyperbolic_plane(params: SchifoParams) -> Sublattice:
    return hyperbolic_complement(params.M, params.ell, params.a)


def build_h(params: SchifoParams, plane: Sublattice | None = None) -> LatticeVector:
    plane = plane or hyperbolic_plane(params)
    Am = params.A * params.m_value
    if Am % 2:
        raise DomainError("A m must be even")
    e, f = plane.basis
    return e + (Am // 2) * f


@dataclass(frozen=True)
class SchifoLattice:
    sublattice: Sublattice  # basis (ell, w)
    w: LatticeVector
    w_diag: LatticeVector  # (m A n) b + h, orthogonal to ell
    b: LatticeVector
    b_square: int
    h: LatticeVector
    k: LatticeVector  # primitivity witness: k.ell = 0, k.w = 1
    A: int
    C: int
    m: int
    n: int
    change_of_basis: tuple  # columns express (ell, w_diag) in the basis (ell, w)

    @property
    def gram(self) -> tuple:
        return self.sublattice.gram

    @property
    def form(self) -> BinaryForm:
        return BinaryForm.from_lattice(self.sublattice.as_lattice())

    @property
    def diagonal(self) -> tuple[int, int]:
        return (self.A, self.C)

    @property
    def is_hyperbolic(self) -> bool:
        return self.C < 0


def build_lattice(params: SchifoParams, h: LatticeVector, n: int | None = None,
                  plane: Sublattice | None = None) -> SchifoLattice:
    n = params.n if n is None else n
    if n is None:
        n = 1
    A, m = params.A, params.m_value
    ell, a = params.ell, params.a
    la = pair(ell, a)
    w = (m * A * A * n) * a + h
    b = A * a - la * ell
    b2 = square(b)
    w_diag = (m * A * n) * b + h
    C = A * m * (m * A * n * n * b2 + 1)
    S = Sublattice(params.M, (ell, w))
    if square(w_diag) != C or pair(w_diag, ell) != 0:
        raise CertificateError("diagonal basis does not have the expected Gram matrix")
    if b2 != A * (A * square(a) - la * la):
        raise CertificateError("b^2 does not match A (A a^2 - (ell.a)^2)")
    plane = plane or hyperbolic_plane(params)
    k = plane.basis[1]  # the f of U: f.h = 1 and f is orthogonal to ell and a
    if pair(k, ell) != 0 or pair(k, w) != 1:
        raise CertificateError("primitivity witness failed")
    T = ((1, -m * A * n * la), (0, 1))
    return SchifoLattice(S, w, w_diag, b, b2, h, k, A, C, m, n, T)


# -- certificates -----------------------------------------------------------------

@dataclass(frozen=True)
class AvoidanceCertificate:
    primitivity_witness: tuple
    diagonalized_form: tuple
    per_i_reasons: tuple
    brute_force_radius: int
    data: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"schema": CERT_SCHEMA,
                "primitivity_witness": list(self.primitivity_witness),
                "diagonalized_form": list(self.diagonalized_form),
                "per_i_reasons": [dict(r) for r in self.per_i_reasons],
                "brute_force_radius": self.brute_force_radius,
                **self.data}

    @classmethod
    def from_dict(cls, obj: dict) -> "AvoidanceCertificate":
        known = {"schema", "primitivity_witness", "diagonalized_form", "per_i_reasons", "brute_force_radius"}
        return cls(tuple(obj["primitivity_witness"]), tuple(obj["diagonalized_form"]),
                   tuple(obj["per_i_reasons"]), int(obj["brute_force_radius"]),
                   {k: v for k, v in obj.items() if k not in known})


def _reason(i: int, A: int, C: int, m: int) -> dict:
    if i == 0:
        val = abs(C // A)
        return {"i": 0, "reason": "nonsquare_coefficient", "value": val, "isqrt": isqrt(val),
                "definite": C > 0}
    if i % A:
        return {"i": i, "reason": "parity", "A": A}
    d = i // A
    Qd = Q(d)
    q = isqrt(d) if is_square(d) else None
    rec = {"i": i, "reason": "forced_square_then_mod4", "d": d, "Q": Qd, "q": q}
    if q is not None:
        rec["m_over_q2"] = m // (q * q)
        rec["residue_trace"] = dict(RESIDUE_TRACE)
    return rec


def certify_avoidance(lat: SchifoLattice, params: SchifoParams, box: int = DEFAULT_BOX,
                      cross_check: bool = True) -> AvoidanceCertificate:
    if lat.n < 1:
        raise DomainError("certification needs n >= 1")
    A, C, m, N = lat.A, lat.C, lat.m, params.N
    reasons = tuple(_reason(i, A, C, m) for i in range(N + 1))
    M = params.M
    data = {
        "N": N, "m": m, "n": lat.n, "A": A, "b_square": lat.b_square,
        "ambient_gram": [list(r) for r in M.gram],
        "ell": list(params.ell.coords), "w": list(lat.w.coords), "w_diag": list(lat.w_diag.coords),
        "lattice_gram": [list(r) for r in lat.gram],
        "change_of_basis": [list(r) for r in lat.change_of_basis],
    }
    f = BinaryForm(A, 0, C)
    brute = []
    for i in range(N + 1):
        hit = find_value(f, -i, box) if box > 0 else None
        brute.append({"i": i, "found": None if hit is None else list(hit)})
        if hit is not None:
            raise CertificateError(f"box search found a vector of square {-i}: {hit}", index=i)
    data["brute_force"] = brute
    if cross_check:
        checks = []
        for i in range(N + 1):
            dec = represents(f, -i)
            if dec.value:
                raise CertificateError(f"form represents {-i} at {dec.witness}", index=i)
            checks.append({"i": i, "represents": False})
        data["represents_cross_check"] = checks
    cert = AvoidanceCertificate(tuple(lat.k.coords), (A, C), reasons, box, data)
    validate_certificate(cert)
    return cert


def validate_certificate(cert, rerun_box: int = 0) -> bool:
    """Re-check every reason from the numbers in the certificate alone.

    Raises CertificateError naming the first failing i.
    """
    if isinstance(cert, dict):
        cert = AvoidanceCertificate.from_dict(cert)
    d = cert.data
    try:
        A, C = (int(x) for x in cert.diagonalized_form)
        m, n, N, b2 = int(d["m"]), int(d["n"]), int(d["N"]), int(d["b_square"])
    except (KeyError, TypeError, ValueError) as exc:
        raise CertificateError(f"certificate is missing a field: {exc}") from exc
    if A <= 0 or d.get("A", A) != A:
        raise CertificateError("A must be positive")
    if m <= 0 or is_square(m) or m % m1(A, N):
        raise CertificateError(f"m = {m} is not a non-square multiple of m1(A, N) = {m1(A, N)}")
    if C != A * m * (m * A * n * n * b2 + 1):
        raise CertificateError("diagonal coefficient does not equal A m (m A n^2 b^2 + 1)")
    _check_structure(cert, A, C)
    reasons = list(cert.per_i_reasons)
    if [r.get("i") for r in reasons] != list(range(N + 1)):
        raise CertificateError("reasons must cover every i in [0, N] exactly once")
    for r in reasons:
        _check_reason(r, A, C, m)
    if rerun_box:
        f = BinaryForm(A, 0, C)
        for i in range(N + 1):
            hit = find_value(f, -i, rerun_box)
            if hit is not None:
                raise CertificateError(f"vector {hit} has square {-i}", index=i)
    return True


def _check_structure(cert: AvoidanceCertificate, A: int, C: int):
    d = cert.data
    if "ambient_gram" not in d:
        return
    G = d["ambient_gram"]
    ell, w, wd, k = d["ell"], d["w"], d["w_diag"], list(cert.primitivity_witness)

    def p(u, v):
        return intmat.dot(intmat.matvec(G, u), v)

    if intmat.content_of(ell) != 1:
        raise CertificateError("ell is not primitive")
    if p(k, ell) != 0 or p(k, w) != 1:
        raise CertificateError("primitivity witness k does not satisfy k.ell = 0 and k.w = 1")
    gram = [[p(ell, ell), p(ell, w)], [p(w, ell), p(w, w)]]
    if gram != [list(r) for r in d["lattice_gram"]]:
        raise CertificateError("lattice Gram matrix does not match the basis vectors")
    T = [list(r) for r in d["change_of_basis"]]
    if abs(intmat.det(T)) != 1:
        raise CertificateError("change of basis is not unimodular")
    expect = [T[0][0] * e + T[1][0] * x for e, x in zip(ell, w)], [T[0][1] * e + T[1][1] * x for e, x in zip(ell, w)]
    if expect[0] != list(ell) or expect[1] != list(wd):
        raise CertificateError("change of basis does not map (ell, w) to (ell, w')")
    if p(ell, ell) != A or p(ell, wd) != 0 or p(wd, wd) != C:
        raise CertificateError("diagonal basis does not have Gram diag(A, C)")


def _check_reason(r: dict, A: int, C: int, m: int):
    i = r["i"]
    kind = r.get("reason")
    if i == 0:
        if kind != "nonsquare_coefficient":
            raise CertificateError("i = 0 needs the non-square coefficient reason", index=0)
        val = abs(C // A)
        if r.get("value") != val or C % A:
            raise CertificateError("coefficient value mismatch", index=0)
        if C < 0:
            s = r.get("isqrt")
            if not isinstance(s, int) or not (s * s < val < (s + 1) ** 2):
                raise CertificateError(f"|C/A| = {val} is not certified non-square", index=0)
        return
    if kind == "parity":
        if i % A == 0:
            raise CertificateError(f"A = {A} divides {i}", index=i)
        return
    if kind != "forced_square_then_mod4":
        raise CertificateError(f"unknown reason {kind!r}", index=i)
    if i % A:
        raise CertificateError("forced-square reason needs A | i", index=i)
    d = i // A
    if r.get("d") != d:
        raise CertificateError("d != i / A", index=i)
    Qd = r.get("Q")
    if Qd != Q(d):
        raise CertificateError(f"Q({d}) is {Q(d)}, not {Qd}", index=i)
    if m % (4 * Qd):
        raise CertificateError(f"4 Q(d) = {4 * Qd} does not divide m = {m}", index=i)
    q = r.get("q")
    if q is None:
        if d % Qd == 0:
            raise CertificateError(f"Q(d) divides d = {d}, so d is a square", index=i)
        return
    if q * q != d:
        raise CertificateError(f"q^2 = {q * q} is not d = {d}", index=i)
    if r.get("m_over_q2") != m // (q * q) or (m // (q * q)) % 4:
        raise CertificateError("m / q^2 is not divisible by 4", index=i)
    tr = r.get("residue_trace") or {}
    mod, sq, tgt = tr.get("modulus"), tr.get("squares"), tr.get("target")
    if mod != 4 or tgt != (-1) % 4:
        raise CertificateError("residue trace must reduce x^2 = -1 modulo 4", index=i)
    if sorted(sq or []) != sorted({x * x % 4 for x in range(4)}) or tgt in sq:
        raise CertificateError("residue trace squares are wrong or contain the target", index=i)


# -- pipeline -------------------------------------------------------------------

def avoidance_walls(N: int) -> WallSpec:
    """Walls of every negative square down to -N, any divisibility."""
    entries = tuple(WallEntry(-i, None, "excluded squares") for i in range(1, N + 1))
    return WallSpec(f"squares >= -{N}", entries, -max(N, 1))


@dataclass(frozen=True)
class SchifoResult:
    params: SchifoParams
    lattice: SchifoLattice
    certificate: AvoidanceCertificate
    report: ConeReport | None
    note: str = ""

    def to_dict(self) -> dict:
        lat = self.lattice
        return {
            "lattice": {"gram": [list(r) for r in lat.gram],
                        "basis": [list(v.coords) for v in lat.sublattice.basis],
                        "diagonal": list(lat.diagonal), "m": lat.m, "n": lat.n,
                        "m1": m1(lat.A, self.params.N), "h": list(lat.h.coords),
                        "h_square": square(lat.h), "b": list(lat.b.coords), "b_square": lat.b_square},
            "certificate": self.certificate.to_dict(),
            "report": None if self.report is None else self.report.to_dict(),
            "note": self.note,
        }


def construct_infinite_bir_lattice(M: GramLattice, ell, a, N: int, *, n: int | None = None,
                                   m: int | None = None, n_cap: int = DEFAULT_N_CAP,
                                   box: int = DEFAULT_BOX, cross_check: bool = True,
                                   walls: WallSpec | None = None) -> SchifoResult:
    params = SchifoParams(M, ell, a, N, m=m, n=n)
    plane = hyperbolic_plane(params)
    h = build_h(params, plane)
    note = ""
    if n is None:
        chosen = None
        for cand in range(1, n_cap + 1):
            lat = build_lattice(params, h, cand, plane)
            if lat.is_hyperbolic:
                chosen = lat
                break
        if chosen is None:
            lat = build_lattice(params, h, 1, plane)
            note = (f"b^2 = {lat.b_square} >= 0, so m A n^2 b^2 + 1 > 0 for every n <= {n_cap}: "
                    "the lattice is positive definite and has no vectors of negative square; "
                    "the cone verdict is skipped")
        else:
            lat = chosen
    else:
        lat = build_lattice(params, h, n, plane)
        if not lat.is_hyperbolic:
            note = "the lattice is positive definite for this n; the cone verdict is skipped"
    cert = certify_avoidance(lat, params, box=box, cross_check=cross_check)
    report = None
    if lat.is_hyperbolic:
        report = rank2_cone_report(lat.sublattice.as_lattice(), (1, 0), walls or avoidance_walls(N),
                                   embedding=lat.sublattice)
    return SchifoResult(params, lat, cert, report, note)
