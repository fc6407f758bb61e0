from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass(frozen=True)
class Failure:
    check: str
    witness: dict[str, Any]
    residual: float = float("nan")

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {"check": self.check, "witness": self.witness}
        if self.residual == self.residual:  # skip NaN
            out["residual"] = self.residual
        return out


@dataclass
class ValidationReport:
    """Outcome of a check suite.

    ``passed`` is derived from ``failures``; ``notes`` carry informational
    findings that do not count as failures.
    """

    failures: list[Failure] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    checked: int = 0

    @property
    def passed(self) -> bool:
        return not self.failures

    def __bool__(self) -> bool:
        return self.passed

    def fail(self, check: str, residual: float = float("nan"), **witness: Any) -> None:
        self.failures.append(Failure(check, witness, float(residual)))

    def expect(self, ok: bool, check: str, residual: float = float("nan"), **witness: Any) -> bool:
        self.checked += 1
        if not ok:
            self.fail(check, residual, **witness)
        return ok

    def extend(self, other: ValidationReport) -> ValidationReport:
        self.failures.extend(other.failures)
        self.notes.extend(other.notes)
        self.checked += other.checked
        return self

    def failed_checks(self) -> set[str]:
        return {f.check for f in self.failures}

    def to_dict(self, max_failures: int = 20) -> dict[str, Any]:
        return {
            "passed": self.passed,
            "checked": self.checked,
            "failure_count": len(self.failures),
            "failures": [f.to_dict() for f in self.failures[:max_failures]],
            "notes": list(self.notes),
        }
