"""Command-line front end.

Every command prints one report.  JSON reports are deterministic: keys are
sorted, no timestamps are recorded, and inputs are identified by SHA-256.
Exit status is 0 on success, 2 for an Undetermined verdict and 1 on errors.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from fractions import Fraction
from importlib import resources
from math import gcd

import jsonschema

from . import __version__
from .catalog import load_catalog, parse_blocks
from .cones import (UNDETERMINED, chamber_decomposition_rank2, in_movable_interior,
                    in_positive_cone, rank2_cone_report, render_svg)
from .enumeration import DEFAULT_WALL_RADIUS_CAP, majorant_gram, short_vectors, wall_divisibility
from .errors import CapacityError, CertificateError, LatticeError
from .forms import DEFAULT_MAX_TARGET, BinaryForm, represents
from .lattice import (GramLattice, LatticeVector, Sublattice, discriminant_group,
                      hyperbolic_complement, orthogonal_complement, signature, span)
from .schifo import DEFAULT_BOX, DEFAULT_N_CAP, construct_infinite_bir_lattice, validate_certificate
from .walls import builtin_walls, walls_from_obj

REPORT_SCHEMA = "hklattice.report/1"
EXIT_OK, EXIT_ERROR, EXIT_UNDETERMINED = 0, 1, 2

_CAP_FLAGS = {"radius": "--radius", "max_target": "--max-target", "n_cap": "--n-cap",
              "box": "--box", "rank_cap": "--radius (rank cap is fixed)",
              "cycle_length": "(cycle length is fixed)", "orbit_period": "(orbit period is fixed)"}


class InputError(Exception):
    """A document failed to parse or validate."""


def _schema(name: str) -> dict:
    return json.loads(resources.files("hklattice").joinpath(f"schemas/{name}.schema.json").read_text(encoding="utf-8"))


class Inputs:
    """Collects the digests of every document a command reads."""

    def __init__(self):
        self.records: dict[str, dict] = {}

    def _note(self, key: str, path, raw: bytes):
        self.records[key] = {"path": path, "sha256": hashlib.sha256(raw).hexdigest()}

    def document(self, key: str, path: str, schema: str):
        with open(path, "rb") as fh:
            raw = fh.read()
        self._note(key, os.path.basename(path), raw)
        text = raw.decode("utf-8")
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            offset = len(text[:exc.pos].encode("utf-8"))
            raise InputError(f"{path}: JSON parse error at byte offset {offset}: {exc.msg}") from None
        if schema is None:
            return obj
        try:
            jsonschema.validate(obj, _schema(schema))
        except jsonschema.ValidationError as exc:
            where = "/".join(str(p) for p in exc.absolute_path) or "(root)"
            raise InputError(f"{path}: field {where}: {exc.message}") from None
        return obj

    def literal(self, key: str, text: str):
        self._note(key, None, text.encode("utf-8"))


def _lattice_from_obj(obj: dict) -> GramLattice:
    if "gram" in obj:
        return GramLattice(tuple(map(tuple, obj["gram"])), label=obj.get("label"),
                           u_planes=tuple(map(tuple, obj.get("u_planes", ()))))
    if "name" in obj:
        cat = load_catalog()
        if obj["name"] not in cat:
            raise InputError(f"no catalog lattice named {obj['name']!r}")
        return cat[obj["name"]].lattice
    return parse_blocks(obj["expr"], label=obj.get("label"))


def read_lattice(source: str, inputs: Inputs, key: str = "lattice") -> GramLattice:
    """A lattice file, a catalog name or a block expression."""
    if os.path.isfile(source):
        return _lattice_from_obj(inputs.document(key, source, "lattice"))
    inputs.literal(key, source)
    cat = load_catalog()
    if source in cat:
        return cat[source].lattice
    return parse_blocks(source)


def read_walls(source: str | None, inputs: Inputs):
    if source is None:
        return None
    if os.path.isfile(source):
        return walls_from_obj(inputs.document("walls", source, "walls"))
    inputs.literal("walls", source)
    return builtin_walls(source)


def parse_vector(text: str, rank: int | None = None) -> tuple[int, ...]:
    t = text.strip().strip("[]()")
    try:
        vec = tuple(int(x) for x in t.replace(",", " ").split())
    except ValueError:
        raise InputError(f"cannot parse integer vector {text!r}") from None
    if rank is not None and len(vec) != rank:
        raise InputError(f"vector {text!r} has length {len(vec)}, expected {rank}")
    return vec


def parse_vectors(text: str, rank: int | None = None) -> list[tuple[int, ...]]:
    return [parse_vector(part, rank) for part in text.split(";") if part.strip()]


def _lattice_summary(L: GramLattice) -> dict:
    D = discriminant_group(L)
    return {"label": L.label, "rank": L.rank, "gram": [list(r) for r in L.gram],
            "det": L.det, "signature": list(signature(L)), "even": L.is_even,
            "discriminant_group": list(D.cyclic_factors), "discriminant_order": D.order,
            "unimodular": D.is_trivial, "u_planes": [list(p) for p in L.u_planes]}


def wall_classes_within(L: GramLattice, ell, walls, radius: Fraction) -> list[tuple[int, ...]]:
    """Primitive wall classes E with E.ell > 0 and majorant value at most radius."""
    if radius > DEFAULT_WALL_RADIUS_CAP:
        raise CapacityError("chamber radius above the enumeration cap", cap="radius", attempted=radius)
    out = []
    for v in short_vectors(majorant_gram(L, ell), radius):
        s = sum(L.gram[i][j] * v[i] * v[j] for i in range(L.rank) for j in range(L.rank))
        el = sum(L.gram[i][j] * v[i] * ell[j] for i in range(L.rank) for j in range(L.rank))
        if el <= 0 or gcd(*v) != 1 or not walls.entries_for(s):
            continue
        if walls.match(s, wall_divisibility(v, L.gram)):
            out.append(v)
    return sorted(out)


# -- commands -------------------------------------------------------------------

def cmd_lattice_info(args, inputs):
    L = read_lattice(args.lattice, inputs)
    return _lattice_summary(L), EXIT_OK


def cmd_complement(args, inputs):
    L = read_lattice(args.lattice, inputs)
    vecs = [LatticeVector(parse_vector(args.ell, L.rank), L)]
    if args.a:
        vecs.append(LatticeVector(parse_vector(args.a, L.rank), L))
    S = orthogonal_complement(span(vecs))
    out = {"vectors": [list(v.coords) for v in vecs],
           "orthogonal_complement": {"basis": [list(v.coords) for v in S.basis],
                                     "gram": [list(r) for r in S.gram]}}
    if args.hyperbolic:
        if not args.a:
            raise InputError("--hyperbolic needs both --ell and --a")
        U = hyperbolic_complement(L, vecs[0], vecs[1])
        out["hyperbolic_plane"] = {"basis": [list(v.coords) for v in U.basis],
                                   "gram": [list(r) for r in U.gram],
                                   "pairings": {"u.ell": 0, "u.a": 0, "v.ell": 0, "v.a": 0}}
    return out, EXIT_OK


def cmd_forms_represents(args, inputs):
    if args.lattice:
        f = BinaryForm.from_lattice(read_lattice(args.lattice, inputs))
    elif args.form:
        if len(args.form) != 3:
            raise InputError("a form is given as three integers: a 2b c")
        inputs.literal("form", " ".join(map(str, args.form)))
        f = BinaryForm.from_classical(*args.form)
    else:
        raise InputError("give a form 'a 2b c' or --lattice")
    dec = represents(f, args.n, primitive=args.primitive, max_target=args.max_target)
    return {"form": [f.a, f.b, f.c], "classical": list(f.classical), "disc": f.disc,
            "target": args.n, "primitive": args.primitive, "represents": dec.value,
            "witness": list(dec.witness) if dec.witness else None,
            "certificate": dec.certificate.to_dict()}, EXIT_OK


def cmd_schifo_build(args, inputs):
    M = read_lattice(args.lattice, inputs)
    ell = parse_vector(args.ell, M.rank)
    a = parse_vector(args.a, M.rank)
    walls = read_walls(args.walls, inputs)
    res = construct_infinite_bir_lattice(M, ell, a, args.N, n=args.n, m=args.m, n_cap=args.n_cap,
                                         box=args.box, cross_check=not args.no_cross_check,
                                         walls=walls)
    out = res.to_dict()
    code = EXIT_OK
    if res.report is not None and res.report.verdict == UNDETERMINED:
        code = EXIT_UNDETERMINED
    return out, code


def cmd_schifo_verify(args, inputs):
    obj = inputs.document("certificate", args.certificate, None)
    # accept a bare certificate, a build result, or a full report envelope
    if "result" in obj:
        obj = obj["result"]
    if "certificate" in obj:
        obj = obj["certificate"]
    try:
        jsonschema.validate(obj, _schema("avoidance"))
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "(root)"
        raise InputError(f"{args.certificate}: field {where}: {exc.message}") from None
    validate_certificate(obj, rerun_box=args.box)
    return {"valid": True, "N": obj["N"], "diagonalized_form": obj["diagonalized_form"],
            "rechecked_box": args.box}, EXIT_OK


def cmd_cone_locate(args, inputs):
    L = read_lattice(args.lattice, inputs)
    ell = parse_vector(args.ell, L.rank)
    h = parse_vector(args.h, L.rank)
    walls = read_walls(args.walls, inputs)
    if walls is None:
        raise InputError("cone-locate needs --walls")
    pos = in_positive_cone(L, h, ell)
    dec = in_movable_interior(L, h, ell, walls, radius_cap=Fraction(args.radius))
    return {"ample": list(ell), "h": list(h), "in_positive_cone": pos,
            "in_movable_interior": dec.value, "certificate": dec.certificate.to_dict(),
            "walls": walls.to_dict()}, EXIT_OK


def _default_ample(f: BinaryForm):
    for r in range(1, 50):
        for x in range(-r, r + 1):
            for y in (-r, r) if abs(x) != r else range(-r, r + 1):
                if f(x, y) > 0 and (x, y) > (0, 0):
                    return (x, y)
    raise InputError("no class of positive square found; pass --ell")


def _rank2_input(args, inputs):
    if args.lattice:
        L = read_lattice(args.lattice, inputs)
    elif args.form:
        if len(args.form) != 3:
            raise InputError("a form is given as three integers: a 2b c")
        inputs.literal("form", " ".join(map(str, args.form)))
        L = BinaryForm.from_classical(*args.form).lattice()
    else:
        raise InputError("give --lattice or --form")
    return L


def cmd_bir_rank2(args, inputs):
    L = _rank2_input(args, inputs)
    f = BinaryForm.from_lattice(L)
    ell = parse_vector(args.ell, 2) if args.ell else _default_ample(f)
    walls = read_walls(args.walls, inputs)
    rep = rank2_cone_report(L, ell, walls)
    out = rep.to_dict()
    if walls is not None:
        out["walls"] = walls.to_dict()
    return out, EXIT_UNDETERMINED if rep.verdict == UNDETERMINED else EXIT_OK


def cmd_chambers(args, inputs):
    L = read_lattice(args.lattice, inputs)
    ell = parse_vector(args.ell, L.rank)
    plane = None
    if args.plane:
        plane = Sublattice(L, tuple(parse_vectors(args.plane, L.rank)))
    if args.classes:
        classes = parse_vectors(args.classes, L.rank)
    elif args.walls:
        classes = wall_classes_within(L, ell, read_walls(args.walls, inputs), Fraction(args.radius))
    else:
        classes = []
    dec = chamber_decomposition_rank2(L, ell, classes, plane=plane)
    out = dec.to_dict()
    out["wall_classes"] = [list(c) for c in sorted(classes)]
    if args.format == "svg":
        return render_svg(dec), EXIT_OK
    return out, EXIT_OK


# -- driver ---------------------------------------------------------------------

def _add_common(p):
    p.add_argument("--format", choices=["json", "text", "svg"], default="json")
    p.add_argument("--output", "-o", help="write the report here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hklattice", description="Exact lattice toolkit for hyper-Kähler lattices.")
    parser.add_argument("--version", action="version", version=f"hklattice {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("lattice-info", help="rank, signature, discriminant group")
    p.add_argument("--lattice", required=True, help="lattice JSON file, catalog name or block expression")
    _add_common(p)

    p = sub.add_parser("complement", help="orthogonal complement and hyperbolic plane")
    p.add_argument("--lattice", required=True)
    p.add_argument("--ell", required=True)
    p.add_argument("--a")
    p.add_argument("--hyperbolic", action="store_true", help="also extract a copy of U inside the complement")
    _add_common(p)

    p = sub.add_parser("forms-represents", help="decide whether a binary form takes a value")
    p.add_argument("form", nargs="*", type=int, help="three integers a 2b c")
    p.add_argument("--lattice", help="rank-2 lattice instead of a form")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--primitive", action="store_true")
    p.add_argument("--max-target", type=int, default=DEFAULT_MAX_TARGET)
    _add_common(p)

    for name in ("schifo-build",):
        p = sub.add_parser(name, help="build and certify an exceptional-free rank-2 lattice")
        _add_schifo_build_args(p)
        _add_common(p)
    p = sub.add_parser("schifo-verify", help="re-validate an avoidance certificate")
    _add_schifo_verify_args(p)
    _add_common(p)

    p = sub.add_parser("cone-locate", help="movable-interior test for a class")
    p.add_argument("--lattice", required=True)
    p.add_argument("--ell", required=True)
    p.add_argument("--h", required=True)
    p.add_argument("--walls", required=True, help="wall JSON file or shipped name (K3)")
    p.add_argument("--radius", default=str(DEFAULT_WALL_RADIUS_CAP), help="cap on the enumeration radius")
    _add_common(p)

    p = sub.add_parser("bir-rank2", help="rank-2 birational automorphism verdict")
    p.add_argument("--lattice")
    p.add_argument("--form", nargs=3, type=int, metavar=("A", "B2", "C"))
    p.add_argument("--ell")
    p.add_argument("--walls")
    _add_common(p)

    p = sub.add_parser("chambers", help="rank-2 wall-and-chamber decomposition")
    p.add_argument("--lattice", required=True)
    p.add_argument("--ell", required=True)
    p.add_argument("--classes", help="explicit wall classes 'x,y;x,y'")
    p.add_argument("--walls", help="enumerate wall classes from this wall data")
    p.add_argument("--radius", default="64", help="majorant radius for --walls")
    p.add_argument("--plane", help="two vectors spanning a plane of a rank-3 lattice")
    _add_common(p)
    return parser


def _add_schifo_build_args(p):
    p.add_argument("--lattice", required=True)
    p.add_argument("--ell", required=True)
    p.add_argument("--a", required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--n-cap", type=int, default=DEFAULT_N_CAP)
    p.add_argument("--box", type=int, default=DEFAULT_BOX)
    p.add_argument("--walls", help="wall data for the cone report (default: every square down to -N)")
    p.add_argument("--no-cross-check", action="store_true")


def _add_schifo_verify_args(p):
    p.add_argument("certificate")
    p.add_argument("--box", type=int, default=0, help="also rerun the box search with this radius")


COMMANDS = {
    "lattice-info": cmd_lattice_info,
    "complement": cmd_complement,
    "forms-represents": cmd_forms_represents,
    "schifo-build": cmd_schifo_build,
    "schifo-verify": cmd_schifo_verify,
    "cone-locate": cmd_cone_locate,
    "bir-rank2": cmd_bir_rank2,
    "chambers": cmd_chambers,
}


def _options(args) -> dict:
    skip = {"command", "format", "output"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def render_text(command: str, result: dict) -> str:
    lines = [f"{command}:"]
    for key in sorted(result):
        val = result[key]
        if isinstance(val, (dict, list)):
            val = json.dumps(val, sort_keys=True)
            if len(val) > 160:
                val = val[:157] + "..."
        lines.append(f"  {key}: {val}")
    return "\n".join(lines) + "\n"


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    args = parser.parse_args(argv)
    return _dispatch(args, stdout, stderr)


def _dispatch(args, stdout, stderr) -> int:
    inputs = Inputs()
    try:
        result, code = COMMANDS[args.command](args, inputs)
    except InputError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_ERROR
    except CertificateError as exc:
        where = f" at i = {exc.index}" if exc.index is not None else ""
        print(f"error: certificate invalid{where}: {exc}", file=stderr)
        return EXIT_ERROR
    except CapacityError as exc:
        flag = _CAP_FLAGS.get(exc.cap, exc.cap)
        print(f"error: {exc} (cap {exc.cap}, needed {exc.attempted}; raise {flag})", file=stderr)
        return EXIT_ERROR
    except (LatticeError, ValueError) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_ERROR
    except OSError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_ERROR
    if isinstance(result, str):
        text = result
    elif args.format == "text":
        text = render_text(args.command, result)
    else:
        if args.format == "svg":
            print("error: --format svg is only available for chambers", file=stderr)
            return EXIT_ERROR
        doc = {"schema": REPORT_SCHEMA, "command": args.command, "version": __version__,
               "inputs": inputs.records, "options": _options(args), "result": result}
        text = json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return code


def main(argv=None) -> int:
    return run(argv)


def schifo_main(argv=None) -> int:
    """Entry point for ``schifo build ...`` / ``schifo verify ...``."""
    parser = argparse.ArgumentParser(prog="schifo", description="Build or verify exceptional-free rank-2 lattices.")
    sub = parser.add_subparsers(dest="action", required=True)
    p = sub.add_parser("build")
    _add_schifo_build_args(p)
    _add_common(p)
    p = sub.add_parser("verify")
    _add_schifo_verify_args(p)
    _add_common(p)
    args = parser.parse_args(argv)
    args.command = "schifo-" + args.action
    del args.action
    return _dispatch(args, sys.stdout, sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
