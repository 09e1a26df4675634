"""Reproduction suite for the two-qubit family of reduced maps."""

from __future__ import annotations

import logging
import math

import numpy as np

from ..core.hermmap import (
    compose,
    entanglement_witness,
    is_completely_positive,
    is_trace_preserving,
    signed_kraus,
)
from ..core.matlin import eig_hermitian, identity, random_hermitian
from ..systems.twoqubit import (
    CorrelationParams,
    analytic_eigensystem,
    analytic_kraus,
    correlation_params,
    extended_witness_value,
    product_state_map,
    reduced_map,
    singlet_state,
    small_t_series,
    witness_P,
    witness_W,
)
from .base import ValidationCheck, ValidationResult, check_at_least, check_at_most, check_close

logger = logging.getLogger(__name__)

EIGENCURVE_POINTS = 512
# |a|^2 = 1/2 for the eigenvalue curves.
CURVE_A = (-0.5, 0.5)
SERIES_OMEGA_T = 1e-3
WITNESS_RADII = (0.1, 0.5, 1.0)
CP_SAMPLES = 64
HERMITIAN_SAMPLES = 20


def _random_params(rng: np.random.Generator) -> CorrelationParams:
    radius = math.sqrt(rng.uniform(0.0, 1.0))
    angle = rng.uniform(0.0, 2.0 * math.pi)
    return CorrelationParams(
        radius * math.cos(angle), radius * math.sin(angle), rng.uniform(0.0, 2.0 * math.pi)
    )


def check_eigencurves(points: int = EIGENCURVE_POINTS) -> list[ValidationCheck]:
    """Closed-form eigenvalues against Jacobi along wt in [0, 2 pi] at |a|^2 = 1/2."""
    base = CorrelationParams(CURVE_A[0], CURVE_A[1], 0.0)
    deviation = 0.0
    product_gap = 0.0
    for wt in np.linspace(0.0, 2.0 * math.pi, points):
        p = base.at(float(wt))
        analytic = analytic_eigensystem(p).eigenvalues
        numeric = eig_hermitian(reduced_map(p).b_matrix).eigenvalues
        deviation = max(deviation, float(np.max(np.abs(np.sort(analytic)[::-1] - numeric))))
        target = -0.25 * p.r2 * p.sin**2
        product_gap = max(
            product_gap,
            abs(analytic[0] * analytic[2] - target),
            abs(analytic[1] * analytic[3] - target),
        )
    zeros = max(
        float(np.max(np.abs(analytic_eigensystem(base.at(wt)).eigenvalues[2:])))
        for wt in (0.0, math.pi, 2.0 * math.pi)
    )
    return [
        check_at_most("eigencurve_agreement", deviation, 1e-10, details=f"{points} points"),
        check_at_most("eigencurve_zeros", zeros, 1e-12, details="lambda_3, lambda_4 at wt = n pi"),
        check_at_most("eigencurve_products", product_gap, 1e-12),
    ]


def check_signed_kraus(rng: np.random.Generator, n_params: int) -> list[ValidationCheck]:
    """Reconstruction, signed completeness and orthogonality of the C(n)."""
    reconstruction = completeness = orthogonality = closed_form = 0.0
    for _ in range(n_params):
        p = _random_params(rng)
        b = reduced_map(p)
        sk = signed_kraus(b)
        ak = analytic_kraus(p)
        for _ in range(HERMITIAN_SAMPLES):
            q = random_hermitian(2, rng)
            reconstruction = max(reconstruction, float(np.max(np.abs(sk.apply(q) - b(q)))))
            closed_form = max(closed_form, float(np.max(np.abs(ak.apply(q) - b(q)))))
        completeness = max(
            completeness, float(np.max(np.abs(sk.completeness() - identity(2))))
        )
        gram = sk.gram()
        off = gram - np.diag(np.diag(gram))
        orthogonality = max(orthogonality, float(np.max(np.abs(off), initial=0.0)))
    detail = f"{n_params} parameter sets x {HERMITIAN_SAMPLES} Hermitian samples"
    return [
        check_at_most("kraus_reconstruction", reconstruction, 1e-10, details=detail),
        check_at_most("kraus_closed_form", closed_form, 1e-10, details=detail),
        check_at_most("kraus_completeness", completeness, 1e-10),
        check_at_most("kraus_orthogonality", orthogonality, 1e-10),
    ]


def check_witnesses() -> list[ValidationCheck]:
    """P' eigenvalues, the singlet W value and the entanglement witness."""
    checks = []
    for r in WITNESS_RADII:
        p = CorrelationParams(r, 0.0, 0.5 * math.pi)
        image, expected = witness_P(p)
        checks.append(
            check_close(f"witness_P_r={r}", eig_hermitian(image).min_eigenvalue, expected, 1e-12)
        )

    singlet = singlet_state()
    target = 0.25 * (1.0 - math.sqrt(2.0))
    checks.append(check_close("witness_W_singlet", witness_W(-1.0, -1.0), target, 1e-12))
    p = correlation_params(singlet, 0.5 * math.pi)
    checks.append(
        check_close("witness_W_extended", extended_witness_value(singlet, p), target, 1e-12)
    )

    q = CorrelationParams(CURVE_A[0], CURVE_A[1], 0.3)
    ew = entanglement_witness(reduced_map(q))
    expected = 0.5 * analytic_eigensystem(q).min_eigenvalue
    checks.append(check_close("entanglement_witness", ew.value, expected, 1e-12))
    return checks


def check_small_time_series() -> list[ValidationCheck]:
    """Leading-order series against the exact eigenvalues and C(n)."""
    p = CorrelationParams(CURVE_A[0], CURVE_A[1], SERIES_OMEGA_T)
    series = small_t_series(p)
    exact = analytic_eigensystem(p).eigenvalues
    kraus = analytic_kraus(p).matrices
    lam_error = float(np.max(np.abs(series.eigenvalues - exact)))
    c_error = max(
        float(np.max(np.abs(approx - mat)))
        for approx, mat in zip(series.kraus, kraus, strict=True)
    )
    return [
        check_at_most("series_eigenvalues", lam_error, 1e-9, details=f"wt = {SERIES_OMEGA_T}"),
        check_at_most("series_kraus", c_error, 1e-6, details=f"wt = {SERIES_OMEGA_T}"),
    ]


def check_cp_special_cases(rng: np.random.Generator) -> list[ValidationCheck]:
    """The a = 0 family and the product-state maps are completely positive."""
    worst = math.inf
    two_terms = True
    term_error = 0.0
    for _ in range(CP_SAMPLES):
        p = CorrelationParams(0.0, 0.0, rng.uniform(0.1, 1.4))
        b = reduced_map(p)
        worst = min(worst, eig_hermitian(b.b_matrix).min_eigenvalue)
        numeric = signed_kraus(b)
        closed = analytic_kraus(p)
        two_terms = two_terms and len(numeric.terms) == 2
        for term in closed.terms:
            term_error = max(
                term_error, min(float(np.max(np.abs(term.matrix - m))) for m in numeric.matrices)
            )

        m = product_state_map(rng.uniform(-1.0, 1.0))
        worst = min(worst, eig_hermitian(m.b_matrix).min_eigenvalue)

    return [
        check_at_least(
            "cp_special_cases", worst, -1e-10, details=f"{CP_SAMPLES} a = 0 and product maps"
        ),
        ValidationCheck(
            name="cp_two_terms",
            expected="2 terms",
            actual="2 terms" if two_terms else "other",
            passed=two_terms,
        ),
        check_at_most("cp_closed_form_terms", term_error, 1e-12),
    ]


def check_not_semigroup() -> ValidationCheck:
    """Two half steps do not compose to the full step once a != 0."""
    p = CorrelationParams(CURVE_A[0], CURVE_A[1], 0.4)
    halves = compose(reduced_map(p.at(0.2)), reduced_map(p.at(0.2)))
    gap = float(np.max(np.abs(halves.b_matrix - reduced_map(p).b_matrix)))
    return ValidationCheck(
        name="not_semigroup",
        expected="> 1e-6",
        actual=f"{gap:.3e}",
        passed=gap > 1e-6,
        details="B(0.2) B(0.2) vs B(0.4)",
    )


def validate_two_qubit_family(seed: int = 0, n_params: int = 100) -> ValidationResult:
    """
    Run the two-qubit reproduction suite.

    Args:
        seed: Seed for the sampled parameters and Hermitian test matrices.
        n_params: Number of random (a, wt) for the signed-Kraus checks.

    Returns:
        ValidationResult with one check per reproduced property.
    """
    rng = np.random.default_rng(seed)
    result = ValidationResult(subject=f"two-qubit family (seed={seed})")
    logger.info("Validating two-qubit family with %d parameter sets", n_params)

    for check in check_eigencurves():
        result.add(check)
    for check in check_signed_kraus(rng, n_params):
        result.add(check)
    for check in check_witnesses():
        result.add(check)
    for check in check_small_time_series():
        result.add(check)
    for check in check_cp_special_cases(rng):
        result.add(check)
    result.add(check_not_semigroup())

    p = CorrelationParams(CURVE_A[0], CURVE_A[1], 1.0)
    b = reduced_map(p)
    result.add(
        ValidationCheck(
            name="trace_preserving_not_cp",
            expected="trace preserving, not CP",
            actual=f"tp={is_trace_preserving(b)}, cp={is_completely_positive(b)}",
            passed=is_trace_preserving(b) and not is_completely_positive(b),
        )
    )
    return result
