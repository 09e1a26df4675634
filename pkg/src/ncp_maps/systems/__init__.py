"""System-specific modules."""

from __future__ import annotations

from .domains import (
    DomainSpec,
    RotatedBloch,
    compatibility_sections,
    compatibility_witness,
    intersection_equals_compatibility,
    membership_grid,
    positivity_boundary,
    positivity_surface,
)
from .twoqubit import (
    BlochVector,
    CorrelationParams,
    analytic_eigensystem,
    analytic_kraus,
    classify,
    reduced_map,
    small_t_series,
    witness_P,
    witness_W,
)

__all__ = [
    "BlochVector",
    "CorrelationParams",
    "analytic_eigensystem",
    "analytic_kraus",
    "classify",
    "reduced_map",
    "small_t_series",
    "witness_P",
    "witness_W",
    "DomainSpec",
    "RotatedBloch",
    "compatibility_sections",
    "compatibility_witness",
    "intersection_equals_compatibility",
    "membership_grid",
    "positivity_boundary",
    "positivity_surface",
]
