"""Verification harnesses and the check framework they report through."""

from .base import (
    ValidationCheck,
    ValidationResult,
    check_at_least,
    check_at_most,
    check_close,
)
from .pechukas import (
    AssignmentMap,
    ConstancyReport,
    FactorizationCheck,
    PositivityHunt,
    TheoremRun,
    check_constant_rho_B,
    check_pure_state_factorization,
    hunt_positivity_failure,
    is_product_assignment,
    load_assignment,
    perturbed_assignment,
    product_assignment,
    save_assignment,
    six_vectors,
    verify_theorem,
)
from .twoqubit import validate_two_qubit_family

__all__ = [
    # Generic framework
    "ValidationCheck",
    "ValidationResult",
    "check_at_least",
    "check_at_most",
    "check_close",
    # Assignment maps
    "AssignmentMap",
    "ConstancyReport",
    "FactorizationCheck",
    "PositivityHunt",
    "TheoremRun",
    "check_constant_rho_B",
    "check_pure_state_factorization",
    "hunt_positivity_failure",
    "is_product_assignment",
    "load_assignment",
    "perturbed_assignment",
    "product_assignment",
    "save_assignment",
    "six_vectors",
    "verify_theorem",
    # Two-qubit family
    "validate_two_qubit_family",
]
