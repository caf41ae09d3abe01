"""Verification reports: named checks with residuals and tolerances."""

from __future__ import annotations

from dataclasses import dataclass, field
import math


@dataclass
class Check:
    name: str
    anchor: str
    residual: float
    tolerance: float
    passed: bool
    hard: bool = True
    detail: str = ""

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "anchor": self.anchor,
            "residual": self.residual,
            "tolerance": self.tolerance,
            "pass": self.passed,
            "hard": self.hard,
            "detail": self.detail,
        }


@dataclass
class VerificationReport:
    """Ordered collection of checks.

    A report passes when all of its hard checks pass; soft checks are
    diagnostics that are recorded but never fail the report.
    """

    checks: list[Check] = field(default_factory=list)

    def add(self, name, anchor, residual, tolerance, passed=None, hard=True, detail=""):
        residual = float(residual)
        tolerance = float(tolerance)
        if passed is None:
            passed = math.isfinite(residual) and residual <= tolerance
        self.checks.append(Check(name, anchor, residual, tolerance, bool(passed), hard, detail))
        return self.checks[-1]

    def extend(self, other: "VerificationReport", prefix: str = "") -> "VerificationReport":
        for c in other.checks:
            self.checks.append(
                Check(prefix + c.name, c.anchor, c.residual, c.tolerance, c.passed, c.hard, c.detail)
            )
        return self

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks if c.hard)

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def __contains__(self, name: str) -> bool:
        return any(c.name == name for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if c.hard and not c.passed]

    def to_dict(self) -> dict:
        return {"passed": self.passed, "checks": [c.to_dict() for c in self.checks]}

    def summary(self) -> str:
        lines = []
        for c in self.checks:
            flag = "PASS" if c.passed else ("FAIL" if c.hard else "WARN")
            lines.append(f"{flag:4s} {c.name}: residual {c.residual:.3e} (tol {c.tolerance:.1e})")
        return "\n".join(lines)
