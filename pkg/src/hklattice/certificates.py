"""Machine-checkable records attached to yes/no answers."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Certificate:
    kind: str
    claim: str
    data: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "claim": self.claim, "data": self.data}

    @classmethod
    def from_dict(cls, obj: dict) -> "Certificate":
        return cls(obj["kind"], obj["claim"], dict(obj.get("data", {})))


@dataclass(frozen=True)
class Decision:
    """A boolean answer with its witness (when true) and certificate."""

    value: bool
    witness: tuple | None
    certificate: Certificate

    def __bool__(self):
        return self.value
