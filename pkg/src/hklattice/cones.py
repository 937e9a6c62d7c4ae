"""Positive, movable and effective cones of hyperbolic lattices.

Rank-2 questions are answered exactly through ``forms``; higher-rank point
location goes through the separating-wall enumeration.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cmp_to_key
from math import gcd

from . import intmat
from .arith import sign
from .certificates import Certificate, Decision
from .enumeration import DEFAULT_WALL_RADIUS_CAP, enumerate_separating_walls, separation_constant
from .errors import DomainError, OnWallError
from .forms import (BinaryForm, DivisibilityRule, Ray, _matching_classes, boundary_rays,
                    extremal_rays, has_isotropic_vector, orientation, primitive_representations,
                    represents)
from .lattice import GramLattice, LatticeVector, Sublattice, pair, signature, square
from .walls import WallSpec

BIR_FINITE = "BirFinite"
BIR_INFINITE = "BirInfinite"
UNDETERMINED = "Undetermined"


def _coords(v):
    return tuple(v.coords) if isinstance(v, LatticeVector) else tuple(int(x) for x in v)


def _qpair(L: GramLattice, v, w) -> int:
    return intmat.dot(intmat.matvec(L.gram, v), w)


def _require_hyperbolic(L: GramLattice):
    p, q = signature(L)
    if p != 1 or q < 1:
        raise DomainError(f"need signature (1, n) with n >= 1, got {(p, q)}")


def in_positive_cone(L: GramLattice, v, ell_ref) -> bool:
    """v lies in the component of the positive cone containing ell_ref."""
    _require_hyperbolic(L)
    v, ell = _coords(v), _coords(ell_ref)
    if _qpair(L, ell, ell) <= 0:
        raise DomainError("reference class must have positive square")
    return _qpair(L, v, v) > 0 and _qpair(L, v, ell) > 0


def in_movable_interior(L: GramLattice, h, ell_ref, walls: WallSpec, *, pairing_matrix=None,
                        radius_cap=DEFAULT_WALL_RADIUS_CAP) -> Decision:
    """Is h in the open chamber of ell_ref cut out by the wall classes of ``walls``?"""
    hv = LatticeVector(_coords(h), L)
    lv = LatticeVector(_coords(ell_ref), L)
    if not in_positive_cone(L, hv.coords, lv.coords):
        return Decision(False, None, Certificate(
            "outside_positive_cone", "not movable",
            {"square": square(hv), "pairing_with_ample": pair(hv, lv)}))
    found = enumerate_separating_walls(L, lv, hv, walls, pairing_matrix=pairing_matrix,
                                       radius_cap=radius_cap)
    A, B, AB = square(lv), square(hv), pair(lv, hv)
    kappa = separation_constant(A, B, AB)
    radius = kappa * max((-s for s in walls.squares), default=0)
    if found:
        E = found[0]
        return Decision(False, E.coords, Certificate(
            "blocking_wall", "not in the movable interior",
            {"wall": list(E.coords), "square": square(E), "pairing_with_ample": pair(E, lv),
             "pairing_with_h": pair(E, hv), "all_walls": [list(w.coords) for w in found]}))
    return Decision(True, None, Certificate(
        "no_separating_wall", "in the movable interior",
        {"kappa": str(kappa), "radius": str(radius), "wall_squares": list(walls.squares)}))


# -- rank 2 -------------------------------------------------------------------

def divisibility_rule(L: GramLattice, embedding: Sublattice | None = None) -> DivisibilityRule:
    """Divisibility in L itself, or in the ambient lattice of an embedding of L."""
    f = BinaryForm.from_lattice(L)
    if embedding is None:
        return DivisibilityRule.picard(f)
    if embedding.rank != 2 or embedding.gram != L.gram:
        raise DomainError("embedding basis does not induce the given Gram matrix")
    G = embedding.ambient.gram
    cols = [intmat.matvec(G, b.coords) for b in embedding.basis]
    P = tuple((cols[0][i], cols[1][i]) for i in range(embedding.ambient.rank))
    return DivisibilityRule(P, "ambient")


@dataclass(frozen=True)
class ConeReport:
    lattice: GramLattice
    ample: tuple
    positive_rays: tuple
    effective_rays: tuple
    movable_rays: tuple
    wall_classes: tuple
    verdict: str
    semantics: str
    explanation: str
    certificate: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "gram": [list(r) for r in self.lattice.gram],
            "ample": list(self.ample),
            "positive_rays": [r.to_dict() for r in self.positive_rays],
            "effective_rays": [r.to_dict() for r in self.effective_rays],
            "movable_rays": [r.to_dict() for r in self.movable_rays],
            "wall_classes": [list(w) for w in self.wall_classes],
            "verdict": self.verdict,
            "divisibility_semantics": self.semantics,
            "explanation": self.explanation,
            "certificate": self.certificate,
        }


def _entry_transcript(f: BinaryForm, entry, rule: DivisibilityRule) -> dict:
    rec = {"square": entry.square, "div": entry.div if entry.div else "any"}
    pc = primitive_representations(f, entry.square)
    if not pc.witnesses:
        rec["primitively_represented"] = False
        rec["certificate"] = represents(f, entry.square, primitive=True).certificate.to_dict()
        return rec
    rec["primitively_represented"] = True
    finite, reps, _ = _matching_classes(f, entry, rule)
    rec["class_representatives"] = [list(v) for v in pc.witnesses]
    rec["divisibilities"] = [rule.div(v) for v in pc.witnesses]
    rec["finite"] = finite
    if not finite:
        rec["modulus"] = rule.modulus
    rec["matching"] = [list(v) for v in reps]
    return rec


def rank2_cone_report(L: GramLattice, ell_ref, walls: WallSpec | None,
                      embedding: Sublattice | None = None) -> ConeReport:
    if L.rank != 2:
        raise DomainError("rank2_cone_report needs a rank-2 lattice")
    _require_hyperbolic(L)
    f = BinaryForm.from_lattice(L)
    ell = _coords(ell_ref)
    if f(*ell) <= 0:
        raise DomainError(f"reference class {ell} does not have positive square")
    rule = divisibility_rule(L, embedding)
    iso = has_isotropic_vector(f)
    bounds = boundary_rays(f, ell)
    positive = (bounds[-1], bounds[1])
    if walls is None:
        if iso.value:
            verdict, why = BIR_FINITE, "the lattice contains an isotropic class"
            cert = {"isotropic_vector": list(iso.witness)}
        else:
            verdict, why = UNDETERMINED, "no wall data supplied and the lattice is anisotropic; the verdict depends on the wall classes"
            cert = {"anisotropy": iso.certificate.to_dict()}
        return ConeReport(L, ell, positive, positive, positive, (), verdict, rule.semantics, why, cert)
    why_shift = ""
    try:
        rays = extremal_rays(f, ell, walls, rule)
    except OnWallError:
        old = ell
        ell, rays = _off_wall(f, ell, walls, rule)
        bounds = boundary_rays(f, ell)
        positive = (bounds[-1], bounds[1])
        why_shift = f"; the reference class {old} lies on a wall, so rays are reported for the nearby class {ell}"
    movable = tuple(s.movable for s in rays.sides())
    effective = tuple(s.effective for s in rays.sides())
    wall_classes = tuple(s.wall for s in rays.sides() if s.wall is not None)
    transcript = [_entry_transcript(f, e, rule) for e in walls.entries]
    cert = {"anisotropy" if not iso.value else "isotropic_vector":
            iso.certificate.to_dict() if not iso.value else list(iso.witness),
            "wall_entries": transcript}
    matched = [m for rec in transcript for m in rec.get("matching", [])]
    if iso.value:
        verdict, why = BIR_FINITE, "the lattice contains an isotropic class"
    elif matched:
        verdict, why = BIR_FINITE, f"the lattice contains the wall class {tuple(matched[0])}"
    else:
        verdict, why = BIR_INFINITE, "no isotropic class and no class matching the wall data"
    return ConeReport(L, ell, positive, effective, movable, wall_classes, verdict,
                      rule.semantics, why + why_shift, cert)


def _off_wall(f: BinaryForm, ell, walls, rule):
    # N ell + w with w orthogonal to ell; large N keeps it near ell
    g = (f.a * ell[0] + f.b * ell[1], f.b * ell[0] + f.c * ell[1])
    w = _prim((-g[1], g[0]))
    N = 2
    while True:
        cand = (N * ell[0] + w[0], N * ell[1] + w[1])
        if f(*cand) > 0:
            try:
                return cand, extremal_rays(f, cand, walls, rule)
            except OnWallError:
                pass
        N *= 2


# -- chambers -----------------------------------------------------------------

@dataclass(frozen=True)
class Chamber:
    lower: Ray
    upper: Ray
    contains_ample: bool
    sample: tuple

    def to_dict(self) -> dict:
        return {"lower": self.lower.to_dict(), "upper": self.upper.to_dict(),
                "contains_ample": self.contains_ample, "sample": list(self.sample)}


@dataclass(frozen=True)
class ChamberDecomposition:
    form: BinaryForm
    ample: tuple
    chambers: tuple
    cuts: tuple  # wall rays inside the cone, in counter-clockwise order

    @property
    def ample_index(self) -> int:
        return next(i for i, c in enumerate(self.chambers) if c.contains_ample)

    def locate(self, v) -> int | None:
        """Index of the chamber whose interior holds v, None if v sits on a wall."""
        v = tuple(v)
        if self.form(*v) <= 0 or self.form.pair(v, self.ample) <= 0:
            raise DomainError(f"{v} is not in the positive cone of the ample class")
        idx = 0
        for r in self.cuts:
            d = _cross(r, v)
            if d == 0:
                return None
            if d > 0:
                idx += 1
        return idx

    def to_dict(self) -> dict:
        return {"form": [self.form.a, self.form.b, self.form.c], "ample": list(self.ample),
                "ample_index": self.ample_index,
                "chambers": [c.to_dict() for c in self.chambers],
                "cuts": [list(r) for r in self.cuts]}


def _cross(u, v) -> int:
    return u[0] * v[1] - u[1] * v[0]


def _prim(v):
    g = gcd(*v)
    return (v[0] // g, v[1] // g)


def _outside_sample(f: BinaryForm, r, ell):
    """A rational positive point strictly beyond the ray r, away from ell."""
    N = 2
    while True:
        x = (N * r[0] - ell[0], N * r[1] - ell[1])
        if f(*x) > 0 and f.pair(x, ell) > 0:
            return x
        N *= 2


def chamber_decomposition_rank2(L: GramLattice, ell_ref, wall_classes,
                                plane: Sublattice | None = None) -> ChamberDecomposition:
    """Chambers cut out of the positive cone by the orthogonals of the wall classes.

    With ``plane`` given, L may have signature (1, 2): ell_ref and the walls
    live in L and the decomposition is that of the plane's positive cone.
    """
    if plane is None:
        if L.rank != 2:
            raise DomainError("give a 2-plane to restrict a higher-rank lattice")
        _require_hyperbolic(L)
        f = BinaryForm.from_lattice(L)
        ell = _coords(ell_ref)
        functionals = [tuple(intmat.matvec(L.gram, _coords(E))) for E in wall_classes]
    else:
        if plane.rank != 2:
            raise DomainError("plane must have rank 2")
        f = BinaryForm.from_lattice(plane.as_lattice())
        if not f.is_indefinite:
            raise DomainError("plane is not hyperbolic")
        lv = LatticeVector(_coords(ell_ref), plane.ambient)
        co = plane.coordinates_of(lv)
        if co is None or any(c.denominator != 1 for c in co):
            raise DomainError("ample class does not lie in the plane")
        ell = tuple(int(c) for c in co)
        functionals = [tuple(pair(LatticeVector(_coords(E), plane.ambient), b) for b in plane.basis)
                       for E in wall_classes]
    if f(*ell) <= 0:
        raise DomainError(f"ample class {ell} does not have positive square")
    cuts = set()
    for phi in functionals:
        if phi[0] * ell[0] + phi[1] * ell[1] == 0:
            raise DomainError("the ample class lies on a wall")
        if phi == (0, 0):
            continue
        k = _prim((-phi[1], phi[0]))
        if f.pair(k, ell) < 0:
            k = (-k[0], -k[1])
        if f(*k) > 0:
            cuts.add(k)
    order = sorted(cuts, key=cmp_to_key(lambda u, v: -sign(_cross(u, v))))
    bounds = boundary_rays(f, ell)
    edges = [bounds[-1]] + [Ray("wall_orthogonal", r) for r in order] + [bounds[1]]
    chambers = []
    for i in range(len(edges) - 1):
        lo, hi = edges[i], edges[i + 1]
        if lo.generator is not None and hi.generator is not None:
            sample = (lo.generator[0] + hi.generator[0], lo.generator[1] + hi.generator[1])
        elif not order:
            sample = ell
        else:
            # one edge is an irrational boundary, the other a cut ray r
            r = hi.generator if lo.generator is None else lo.generator
            beyond = orientation(ell, r) < 0 if lo.generator is None else orientation(ell, r) > 0
            sample = _outside_sample(f, r, ell) if beyond else ell
        chambers.append([lo, hi, sample])
    dec = ChamberDecomposition(f, ell, (), tuple(order))
    idx_ample = dec.locate(ell)
    out = tuple(Chamber(lo, hi, i == idx_ample, s) for i, (lo, hi, s) in enumerate(chambers))
    return ChamberDecomposition(f, ell, out, tuple(order))


# -- SVG ------------------------------------------------------------------------

def _klein(f: BinaryForm, ell, ray: Ray) -> float:
    """Position of a ray in (-1, 1) on the cross-section through ell (display only)."""
    x, y = ray.approx()
    A = f(*ell)
    w = (-(f.b * ell[0] + f.c * ell[1]), f.a * ell[0] + f.b * ell[1])
    qw = -f(*w)
    u = f.pair((x, y), ell) / A ** 0.5
    t = -f.pair((x, y), w) / qw ** 0.5
    return max(-1.0, min(1.0, t / u)) * (1 if orientation(ell, w) > 0 else -1)


def render_svg(dec: ChamberDecomposition, size: int = 400) -> str:
    """Positive-cone cross-section as a disk; each wall is a vertical chord."""
    r = size * 0.45
    cx = cy = size / 2
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">',
             f'<circle cx="{cx:.2f}" cy="{cy:.2f}" r="{r:.2f}" fill="#f4f4f4" stroke="#333"/>']
    for ray in (Ray("wall_orthogonal", c) for c in dec.cuts):
        k = _klein(dec.form, dec.ample, ray)
        x = cx + k * r
        h = r * max(0.0, 1 - k * k) ** 0.5
        parts.append(f'<line x1="{x:.2f}" y1="{cy - h:.2f}" x2="{x:.2f}" y2="{cy + h:.2f}" stroke="#b22" stroke-width="2"/>')
    ka = _klein(dec.form, dec.ample, Ray("ample", dec.ample))
    parts.append(f'<circle cx="{cx + ka * r:.2f}" cy="{cy:.2f}" r="4" fill="#14c"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
