"""Tests for the generic validation framework."""

import math

from ncp_maps.validation.base import (
    ValidationCheck,
    ValidationResult,
    check_at_least,
    check_at_most,
    check_close,
)


def test_validation_check_creation() -> None:
    check = ValidationCheck("test", "A", "A", True)
    assert check.passed
    assert check.name == "test"
    assert check.details == ""


def test_validation_result_summary() -> None:
    res = ValidationResult("suite")
    res.add(ValidationCheck("ok", "1", "1", True))
    res.add(ValidationCheck("fail", "1", "0", False, details="off by one"))
    summary = res.summary()
    assert summary.startswith("Validation Results for: suite")
    assert "✅ PASS ok" in summary
    assert "❌ FAIL fail" in summary
    assert "Details:  off by one" in summary
    assert "1/2 checks failed" in summary


def test_all_passed_summary() -> None:
    res = ValidationResult("suite", [ValidationCheck("ok", "1", "1", True)])
    assert res.all_passed
    assert res.summary().endswith("✅ All validations passed!")


def test_counts() -> None:
    res = ValidationResult("suite")
    res.add(ValidationCheck("a", "", "", True))
    res.add(ValidationCheck("b", "", "", False))
    res.add(ValidationCheck("c", "", "", True))
    assert res.passed_count == 2
    assert res.failed_count == 1
    assert not res.all_passed


def test_empty_result_passes() -> None:
    assert ValidationResult("nothing").all_passed


def test_as_dict() -> None:
    res = ValidationResult("suite", [ValidationCheck("a", "x", "y", False, "why")])
    payload = res.as_dict()
    assert payload["subject"] == "suite"
    assert payload["all_passed"] is False
    assert payload["checks"] == [
        {"name": "a", "expected": "x", "actual": "y", "passed": False, "details": "why"}
    ]


def test_check_at_most() -> None:
    # Residual below the limit
    c = check_at_most("residual", 1e-13, 1e-10)
    assert c.passed
    assert c.expected == "<= 1.0e-10"
    assert c.actual == "1.000e-13"

    # Limit is inclusive
    assert check_at_most("residual", 1e-10, 1e-10).passed

    # Above the limit
    assert not check_at_most("residual", 2e-10, 1e-10).passed

    # NaN never passes
    assert not check_at_most("residual", math.nan, 1e-10).passed


def test_check_at_least() -> None:
    assert check_at_least("min_eig", -1e-14, -1e-12).passed
    assert not check_at_least("min_eig", -0.5, -1e-12).passed


def test_check_close() -> None:
    c = check_close("value", 0.25, 0.25 + 1e-13, 1e-12, details="singlet")
    assert c.passed
    assert c.details == "singlet"
    assert not check_close("value", 0.25, 0.26, 1e-12).passed
