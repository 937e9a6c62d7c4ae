"""Catalog of standard lattices and the block-expression grammar.

An expression is ``term (+ term)*`` where a term is ``U``, ``E8(-1)``,
``A2(-1)``, ``<k>`` or a catalog name, optionally raised to a power ``^j``
meaning a j-fold orthogonal sum.  Example: ``"U^3 + E8(-1)^2 + <-2>"``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from .errors import DomainError
from .lattice import GramLattice, direct_sum, rescale, zero_lattice


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    lattice: GramLattice
    source: str
    expr: str | None = None


_TERM = re.compile(r"^\s*(<\s*[-+]?\d+\s*>|[A-Za-z][\w\[\]]*(?:\(-?\d+\))?)\s*(?:\^\s*(\d+))?\s*$")


@lru_cache(maxsize=None)
def _raw_catalog() -> dict:
    text = resources.files("hklattice").joinpath("data/catalog.json").read_text(encoding="utf-8")
    return json.loads(text)


def load_catalog(path=None) -> dict[str, CatalogEntry]:
    """Parse the shipped catalog (or a user file with the same layout)."""
    if path is None:
        raw = _raw_catalog()
    else:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    entries: dict[str, CatalogEntry] = {}
    for name, blk in raw.get("blocks", {}).items():
        lat = GramLattice(tuple(map(tuple, blk["gram"])), label=name,
                          u_planes=tuple(map(tuple, blk.get("u_planes", ()))))
        entries[name] = CatalogEntry(name, lat, blk.get("source", ""))
    for name, ent in raw.get("lattices", {}).items():
        if "gram" in ent:
            lat = GramLattice(tuple(map(tuple, ent["gram"])), label=name,
                              u_planes=tuple(map(tuple, ent.get("u_planes", ()))))
        else:
            lat = parse_blocks(ent["expr"], entries, label=name)
        entries[name] = CatalogEntry(name, lat, ent.get("source", ""), ent.get("expr"))
    return entries


def parse_blocks(expr: str, known: dict | None = None, label: str | None = None) -> GramLattice:
    if known is None:
        known = load_catalog()
    if not expr.strip():
        raise DomainError("empty block expression")
    out = zero_lattice()
    for raw_term in _split_terms(expr):
        m = _TERM.match(raw_term)
        if not m:
            raise DomainError(f"cannot parse term {raw_term!r} in {expr!r}")
        atom, power = m.group(1), int(m.group(2) or 1)
        block = _atom(atom, known)
        for _ in range(power):
            out = direct_sum(out, block)
    return GramLattice(out.gram, label=label or expr.strip(), u_planes=out.u_planes)


def _split_terms(expr: str):
    # '+' inside <...> is a sign, not a separator
    depth, cur = 0, []
    for ch in expr:
        if ch == "<":
            depth += 1
        elif ch == ">":
            depth -= 1
        if ch == "+" and depth == 0:
            yield "".join(cur)
            cur = []
        else:
            cur.append(ch)
    yield "".join(cur)


def _atom(atom: str, known: dict) -> GramLattice:
    atom = atom.replace(" ", "")
    if atom.startswith("<"):
        k = int(atom[1:-1])
        if k == 0:
            raise DomainError("<0> is degenerate")
        return GramLattice(((k,),), label=f"<{k}>")
    if atom in known:
        entry = known[atom]
        return entry.lattice if isinstance(entry, CatalogEntry) else entry
    m = re.fullmatch(r"([A-Za-z]\w*)\((-?\d+)\)", atom)
    if m and m.group(1) in known:
        return rescale(_atom(m.group(1), known), int(m.group(2)))
    if atom in ("E8", "A2"):
        return rescale(_atom(atom + "(-1)", known), -1)
    raise DomainError(f"unknown lattice block {atom!r}")


def k3n_lattice(n: int) -> GramLattice:
    """U^3 + E8(-1)^2 + <-2(n-1)> for n >= 2."""
    if n < 2:
        raise DomainError("K3^[n] needs n >= 2")
    return parse_blocks(f"U^3 + E8(-1)^2 + <{-2 * (n - 1)}>", label=f"K3[{n}]")


def kumn_lattice(n: int) -> GramLattice:
    """U^3 + <-2(n+1)> for n >= 2."""
    if n < 2:
        raise DomainError("Kum^n needs n >= 2")
    return parse_blocks(f"U^3 + <{-2 * (n + 1)}>", label=f"Kum{n}")


def get(name: str) -> GramLattice:
    cat = load_catalog()
    if name not in cat:
        raise DomainError(f"no catalog lattice named {name!r}")
    return cat[name].lattice
