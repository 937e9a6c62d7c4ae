"""Numerical wall data: the (square, divisibility) pairs of wall classes."""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from .errors import DomainError


@dataclass(frozen=True)
class WallEntry:
    square: int
    div: int | None = None  # None means any divisibility
    source: str = ""

    def __post_init__(self):
        if not isinstance(self.square, int) or self.square >= 0:
            raise DomainError(f"wall square must be a negative integer, got {self.square!r}")
        if self.div is not None and (not isinstance(self.div, int) or self.div <= 0):
            raise DomainError(f"wall divisibility must be a positive integer or 'any', got {self.div!r}")

    def matches(self, square: int, div: int) -> bool:
        return square == self.square and (self.div is None or div == self.div)

    def to_dict(self) -> dict:
        return {"square": self.square, "div": "any" if self.div is None else self.div,
                "source": self.source}


@dataclass(frozen=True)
class WallSpec:
    label: str
    entries: tuple
    floor: int
    status: str = "user-supplied"

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))
        if not isinstance(self.floor, int) or self.floor >= 0:
            raise DomainError("wall floor must be a negative integer")
        for e in self.entries:
            if e.square < self.floor:
                raise DomainError(f"wall square {e.square} is below the floor {self.floor}")
        for i, e in enumerate(self.entries):
            for f in self.entries[i + 1:]:
                if e.square == f.square and (e.div is None or f.div is None or e.div == f.div):
                    raise DomainError(f"overlapping wall entries for square {e.square}")

    @property
    def squares(self) -> tuple[int, ...]:
        return tuple(sorted({e.square for e in self.entries}, reverse=True))

    def match(self, square: int, div: int) -> WallEntry | None:
        for e in self.entries:
            if e.matches(square, div):
                return e
        return None

    def entries_for(self, square: int) -> list[WallEntry]:
        return [e for e in self.entries if e.square == square]

    def to_dict(self) -> dict:
        return {"label": self.label, "floor": self.floor, "status": self.status,
                "entries": [e.to_dict() for e in self.entries]}


def simple_walls(*squares: int, div=None, label: str = "custom") -> WallSpec:
    """Wall spec with the given squares, all sharing one divisibility constraint."""
    entries = tuple(WallEntry(s, div) for s in squares)
    return WallSpec(label, entries, min(squares) if squares else -2)


def _entry_from_obj(obj: dict) -> WallEntry:
    div = obj.get("div", "any")
    return WallEntry(int(obj["square"]), None if div in ("any", None) else int(div),
                     str(obj.get("source", "")))


def walls_from_obj(obj, label: str = "custom") -> WallSpec:
    """Accept either a bare list of entries or an object with label/floor/entries."""
    if isinstance(obj, list):
        entries = tuple(_entry_from_obj(o) for o in obj)
        floor = min((e.square for e in entries), default=-2)
        return WallSpec(label, entries, floor)
    entries = tuple(_entry_from_obj(o) for o in obj.get("entries", []))
    floor = obj.get("floor")
    if floor is None:
        floor = min((e.square for e in entries), default=-2)
    return WallSpec(obj.get("label", label), entries, int(floor), obj.get("status", "user-supplied"))


def load_walls(path) -> WallSpec:
    with open(path, encoding="utf-8") as fh:
        return walls_from_obj(json.load(fh))


@lru_cache(maxsize=None)
def builtin_walls(name: str = "K3") -> WallSpec:
    raw = json.loads(resources.files("hklattice").joinpath("data/walls.json").read_text(encoding="utf-8"))
    if name not in raw["specs"]:
        raise DomainError(f"no shipped wall data for {name!r}; supply a wall file")
    return walls_from_obj(raw["specs"][name], label=name)
