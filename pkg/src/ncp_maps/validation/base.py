"""Generic check framework for numerical verification runs."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass
class ValidationCheck:
    """Result of a single verification check."""

    name: str
    expected: str
    actual: str
    passed: bool
    details: str = ""


@dataclass
class ValidationResult:
    """Complete results of a verification run."""

    subject: str
    checks: list[ValidationCheck] = field(default_factory=list)

    @property
    def all_passed(self) -> bool:
        """Return True if all checks passed."""
        return all(c.passed for c in self.checks)

    @property
    def passed_count(self) -> int:
        """Count of passed checks."""
        return sum(1 for c in self.checks if c.passed)

    @property
    def failed_count(self) -> int:
        """Count of failed checks."""
        return sum(1 for c in self.checks if not c.passed)

    def add(self, check: ValidationCheck) -> None:
        """Add a check result."""
        self.checks.append(check)

    def summary(self) -> str:
        """Return a formatted summary of the results."""
        lines = [
            f"Validation Results for: {self.subject}",
            "=" * 60,
        ]
        for check in self.checks:
            status = "✅ PASS" if check.passed else "❌ FAIL"
            lines.append(f"{status} {check.name}")
            lines.append(f"       Expected: {check.expected}")
            lines.append(f"       Actual:   {check.actual}")
            if check.details:
                lines.append(f"       Details:  {check.details}")

        lines.append("=" * 60)
        if self.all_passed:
            lines.append("✅ All validations passed!")
        else:
            lines.append(f"❌ {self.failed_count}/{len(self.checks)} checks failed.")
        return "\n".join(lines)

    def as_dict(self) -> dict[str, Any]:
        """JSON-ready form of the report."""
        return {
            "subject": self.subject,
            "all_passed": self.all_passed,
            "checks": [
                {
                    "name": c.name,
                    "expected": c.expected,
                    "actual": c.actual,
                    "passed": c.passed,
                    "details": c.details,
                }
                for c in self.checks
            ],
        }


def check_at_most(name: str, actual: float, limit: float, details: str = "") -> ValidationCheck:
    """
    Pass when a deviation or residual does not exceed ``limit``.

    Args:
        name: Check name for reporting.
        actual: Measured deviation.
        limit: Largest acceptable value.
        details: Optional context for the report.

    Returns:
        ValidationCheck with pass/fail status.
    """
    return ValidationCheck(
        name=name,
        expected=f"<= {limit:.1e}",
        actual=f"{actual:.3e}",
        passed=bool(actual <= limit),
        details=details,
    )


def check_at_least(name: str, actual: float, limit: float, details: str = "") -> ValidationCheck:
    """Pass when ``actual`` is not below ``limit`` (e.g. a least eigenvalue against -tol)."""
    return ValidationCheck(
        name=name,
        expected=f">= {limit:.1e}",
        actual=f"{actual:.3e}",
        passed=bool(actual >= limit),
        details=details,
    )


def check_close(
    name: str, actual: float, expected: float, tol: float, details: str = ""
) -> ValidationCheck:
    """Pass when ``|actual - expected| <= tol``."""
    return ValidationCheck(
        name=name,
        expected=f"{expected:.12g} (tol {tol:.0e})",
        actual=f"{actual:.12g}",
        passed=bool(abs(actual - expected) <= tol),
        details=details,
    )
