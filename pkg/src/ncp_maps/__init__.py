"""ncp_maps - Not-completely-positive maps of open quantum subsystems."""

from __future__ import annotations

# Core (generic)
from .core import MatrixMap, RunConfig, signed_kraus, transfer_matrix

# Systems
from .systems import CorrelationParams, analytic_eigensystem, reduced_map

# Validation
from .validation import (
    AssignmentMap,
    ValidationResult,
    validate_two_qubit_family,
    verify_theorem,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # Core
    "MatrixMap",
    "RunConfig",
    "signed_kraus",
    "transfer_matrix",
    # Two-qubit family
    "CorrelationParams",
    "analytic_eigensystem",
    "reduced_map",
    # Validation
    "AssignmentMap",
    "ValidationResult",
    "validate_two_qubit_family",
    "verify_theorem",
]
