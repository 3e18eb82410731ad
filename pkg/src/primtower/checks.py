"""Result records shared by the verification routines."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class Check:
    """Outcome of one verification over the window ``degrees <= window``."""

    name: str
    ok: bool
    window: int
    details: str = ""
    witness: str | None = None
    per_degree: dict = field(default_factory=dict)
    data: dict = field(default_factory=dict)

    def __bool__(self):
        return self.ok

    def __post_init__(self):
        if not self.ok and self.witness is None:
            raise ValueError(f"failed check {self.name!r} needs a witness")


class StabilizationError(RuntimeError):
    """The truncated ideal has not stabilized; increase the slack."""


class NonConfluentError(RuntimeError):
    """A rewriting overlap resolves to two different normal forms."""

    def __init__(self, message: str, witness: str):
        super().__init__(message)
        self.witness = witness
