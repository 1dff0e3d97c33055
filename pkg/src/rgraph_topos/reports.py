from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass
class CheckReport:
    """Outcome of an exhaustive sweep.  ``passed`` is False iff a
    counterexample was recorded."""

    name: str
    checked: int = 0
    counterexamples: list[dict[str, Any]] = field(default_factory=list)
    skipped: list[dict[str, Any]] = field(default_factory=list)
    details: dict[str, Any] = field(default_factory=dict)
    exhaustive: bool = True

    @property
    def passed(self) -> bool:
        return not self.counterexamples

    def fail(self, **info: Any) -> None:
        self.counterexamples.append(info)

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "passed": self.passed,
            "exhaustive": self.exhaustive,
            "checked": self.checked,
            "counterexamples": self.counterexamples,
            "skipped": self.skipped,
            "details": self.details,
        }


@dataclass(frozen=True)
class Verdict:
    """A yes/no answer plus the witness that explains it."""

    holds: bool
    witness: Any = None

    def __bool__(self) -> bool:
        return self.holds
