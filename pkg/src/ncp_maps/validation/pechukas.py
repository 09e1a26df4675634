"""
Verification harness for linear assignments rho_A -> rho_AB.

A linear rule that gives every density matrix of A a density matrix of AB with
the right partial trace must be X -> X x rho_B with one fixed rho_B. The
harness checks the steps of that argument on a concrete assignment: pure
states are assigned products, the B factor is the same across the six-vector
construction, and any assignment that is not a fixed product assigns a
non-positive matrix to some pure state, which a seeded search locates.

Results are sampling results. A scan that finds no violation bounds
confidence; it does not certify an adversarial assignment.
"""

from __future__ import annotations

import logging
from collections.abc import Callable
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path
from typing import Any

import numpy as np
import numpy.typing as npt
from tqdm.auto import tqdm

from ..core.matlin import (
    ComplexMatrix,
    as_matrix,
    eig_hermitian,
    identity,
    ket_projector,
    partial_contract,
    partial_trace,
    random_density_matrix,
    random_pure_state,
    random_unitary,
    tensor,
)
from ..core.reduced import OperatorBasis, build_basis, product_elements
from ..core.utils import decode_complex, encode_complex, read_json, require_int, write_json
from .base import ValidationCheck, ValidationResult, check_at_most

logger = logging.getLogger(__name__)

# Imaginary parts of output coordinates above this mean the action is not Hermiticity-preserving.
_REAL_TOL = 1e-10
PARTIAL_TRACE_TOL = 1e-10
LINEARITY_TOL = 1e-12
# Least assigned eigenvalue below -POSITIVITY_TOL counts as a violation.
POSITIVITY_TOL = 1e-12
HYPOTHESIS_TOL = 1e-9
PRODUCT_TOL = 1e-8
UNIT_TOL = 1e-10
DEFAULT_SAMPLES = 10_000
FACTORIZATION_SAMPLES = 100
CONSTANCY_PAIRS = 10

# (alpha, beta) grid for the structured search.
_ALPHA_GRID = np.linspace(0.0, np.pi, 17)
_BETA_GRID = np.linspace(0.0, 2.0 * np.pi, 16, endpoint=False)

AssignmentAction = Callable[[ComplexMatrix], npt.ArrayLike]


@dataclass(frozen=True)
class AssignmentMap:
    """
    Linear assignment of NM x NM matrices to N x N matrices.

    ``matrix`` acts on real coordinates: column mu holds the coordinates
    Tr[G_Lambda L(F_mu)] of the image of F_mu in the product basis G of AB.

    Attributes:
        dim_a: N.
        dim_b: M.
        basis_a: Orthonormal Hermitian basis of A.
        basis_b: Orthonormal Hermitian basis of B.
        matrix: Real array of shape ((NM)^2, N^2).
    """

    dim_a: int
    dim_b: int
    basis_a: OperatorBasis
    basis_b: OperatorBasis
    matrix: npt.NDArray[np.float64]

    def __post_init__(self) -> None:
        if self.basis_a.dim != self.dim_a or self.basis_b.dim != self.dim_b:
            raise ValueError(
                f"Bases of dimension ({self.basis_a.dim}, {self.basis_b.dim}) "
                f"do not match ({self.dim_a}, {self.dim_b})"
            )
        n2, m2 = self.dim_a**2, self.dim_b**2
        if self.matrix.shape != (n2 * m2, n2):
            raise ValueError(
                f"Assignment matrix must have shape {(n2 * m2, n2)}, got {self.matrix.shape}"
            )

    @property
    def dims(self) -> tuple[int, int]:
        return self.dim_a, self.dim_b

    @classmethod
    def from_action(
        cls,
        dim_a: int,
        dim_b: int,
        action: AssignmentAction,
        basis_a: OperatorBasis | None = None,
        basis_b: OperatorBasis | None = None,
    ) -> AssignmentMap:
        """
        Tabulate a linear action on the basis of A.

        Raises:
            ValueError: If an image has the wrong shape or is not Hermitian.
        """
        ba = basis_a if basis_a is not None else build_basis(dim_a)
        bb = basis_b if basis_b is not None else build_basis(dim_b)
        products = product_elements(ba, bb)
        size = dim_a * dim_b
        columns = []
        for mu in range(len(ba)):
            image = as_matrix(action(ba[mu]))
            if image.shape != (size, size):
                raise ValueError(f"Action returned shape {image.shape}, expected {(size, size)}")
            coords = np.einsum("gab,ba->g", products, image)
            if np.max(np.abs(coords.imag)) > _REAL_TOL:
                raise ValueError(f"Image of basis element {mu} is not Hermitian")
            columns.append(coords.real)
        return cls(dim_a, dim_b, ba, bb, np.stack(columns, axis=1))

    def apply(self, x: npt.ArrayLike) -> ComplexMatrix:
        """Return L(X); complex X is handled by the linear extension."""
        mat = as_matrix(x)
        if mat.shape != (self.dim_a, self.dim_a):
            raise ValueError(f"Matrix of shape {mat.shape} does not match dimA {self.dim_a}")
        coords = self.matrix @ self.basis_a.coordinates(mat)
        products = product_elements(self.basis_a, self.basis_b)
        return np.einsum("g,gab->ab", coords, products) / (self.dim_a * self.dim_b)

    def __call__(self, x: npt.ArrayLike) -> ComplexMatrix:
        return self.apply(x)

    def partial_trace_residual(self) -> float:
        """Largest entry of Tr_B[L(F_mu)] - F_mu over the basis of A."""
        worst = 0.0
        for mu in range(len(self.basis_a)):
            f = self.basis_a[mu]
            traced = partial_trace(self.apply(f), "second", self.dims)
            worst = max(worst, float(np.max(np.abs(traced - f))))
        return worst

    def b_matrix(self) -> ComplexMatrix:
        """
        Generalized B-matrix with Y_RS = sum B_{Rj;Sk} X_jk.

        Rows and columns are flattened as ``R * N + j`` with R running over AB.
        """
        n, size = self.dim_a, self.dim_a * self.dim_b
        b4 = np.zeros((size, n, size, n), dtype=np.complex128)
        for j in range(n):
            for k in range(n):
                unit = np.zeros((n, n), dtype=np.complex128)
                unit[j, k] = 1.0
                b4[:, j, :, k] = self.apply(unit)
        return b4.reshape(size * n, size * n)

    @classmethod
    def from_b_matrix(cls, dim_a: int, dim_b: int, b: npt.ArrayLike) -> AssignmentMap:
        """Inverse of ``b_matrix`` using the default bases."""
        size = dim_a * dim_b
        arr = as_matrix(b)
        if arr.shape != (size * dim_a, size * dim_a):
            raise ValueError(
                f"Generalized B must have shape {(size * dim_a, size * dim_a)}, got {arr.shape}"
            )
        b4 = arr.reshape(size, dim_a, size, dim_a)

        def action(x: ComplexMatrix) -> ComplexMatrix:
            return np.einsum("RjSk,jk->RS", b4, x)

        return cls.from_action(dim_a, dim_b, action)


def product_assignment(
    rho_b: npt.ArrayLike,
    dim_a: int,
    basis_a: OperatorBasis | None = None,
    basis_b: OperatorBasis | None = None,
) -> AssignmentMap:
    """The assignment X -> X x rho_B."""
    rb = as_matrix(rho_b)
    return AssignmentMap.from_action(
        dim_a, rb.shape[0], lambda x: tensor(x, rb), basis_a=basis_a, basis_b=basis_b
    )


def perturbed_assignment(
    rho_b: npt.ArrayLike,
    eps: float,
    dim_a: int = 2,
    basis_a: OperatorBasis | None = None,
    basis_b: OperatorBasis | None = None,
) -> AssignmentMap:
    """
    X -> X x rho_B + eps Tr[F_10 X] (1/N) 1 x F_01.

    The correction is traceless on B, so the partial trace stays exact. For
    N = M = 2 and rho_B = 1/2 the least eigenvalue over pure states is -eps/2,
    reached at the eigenvectors of F_10.
    """
    rb = as_matrix(rho_b)
    dim_b = rb.shape[0]
    if dim_a < 2 or dim_b < 2:
        raise ValueError("Perturbed assignments need dimA >= 2 and dimB >= 2")
    ba = basis_a if basis_a is not None else build_basis(dim_a)
    bb = basis_b if basis_b is not None else build_basis(dim_b)
    correction = tensor(identity(dim_a), bb[1]) / dim_a
    f10 = ba[1]

    def action(x: ComplexMatrix) -> ComplexMatrix:
        return tensor(x, rb) + eps * np.trace(f10 @ x) * correction

    return AssignmentMap.from_action(dim_a, dim_b, action, basis_a=ba, basis_b=bb)


def save_assignment(a: AssignmentMap, path: Path) -> Path:
    """Write ``{"dimA": N, "dimB": M, "b_matrix": [[re, im], ...]}``."""
    payload = {"dimA": a.dim_a, "dimB": a.dim_b, "b_matrix": encode_complex(a.b_matrix())}
    return write_json(payload, path)


def load_assignment(path: Path) -> AssignmentMap:
    """
    Read an assignment file.

    Raises:
        FileNotFoundError: If the file is missing.
        ValueError: If the document is malformed or the map is not Hermiticity-preserving.
    """
    payload = read_json(path)
    n = require_int(payload, "dimA", path)
    m = require_int(payload, "dimB", path)
    side = n * m * n
    b = decode_complex(payload.get("b_matrix"), (side, side))
    return AssignmentMap.from_b_matrix(n, m, b)


@dataclass(frozen=True)
class FactorizationCheck:
    """
    Outcome of the pure-state factorization test.

    Attributes:
        rho_b: <psi|L(|psi><psi|)|psi>, the B factor.
        residual: Max entry of L(|psi><psi|) - |psi><psi| x rho_b.
        min_eigenvalue: Least eigenvalue of the assigned matrix.
        hypothesis_holds: Whether the assigned matrix is positive to 1e-9.
    """

    rho_b: ComplexMatrix
    residual: float
    min_eigenvalue: float
    hypothesis_holds: bool


def _unit(psi: npt.ArrayLike, dim: int, name: str = "state") -> ComplexMatrix:
    vec = np.asarray(psi, dtype=np.complex128).ravel()
    if vec.shape != (dim,):
        raise ValueError(f"{name} has length {vec.size}, expected {dim}")
    if abs(np.linalg.norm(vec) - 1.0) > UNIT_TOL:
        raise ValueError(f"{name} is not normalized (norm {np.linalg.norm(vec):.6g})")
    return vec


def _factorize(a: AssignmentMap, vec: ComplexMatrix) -> FactorizationCheck:
    proj = ket_projector(vec)
    assigned = a.apply(proj)
    rho_b = partial_contract(assigned, vec, a.dims)
    residual = float(np.max(np.abs(assigned - tensor(proj, rho_b))))
    lam = eig_hermitian(assigned).min_eigenvalue
    return FactorizationCheck(rho_b, residual, lam, lam >= -HYPOTHESIS_TOL)


def check_pure_state_factorization(a: AssignmentMap, psi: npt.ArrayLike) -> FactorizationCheck:
    """
    Extract the B factor assigned to a pure state and measure the product residual.

    A negative ``min_eigenvalue`` means the positivity hypothesis fails at
    ``psi``; that is reported, not raised.

    Raises:
        ValueError: If ``psi`` is not a unit vector of dimension N.
    """
    return _factorize(a, _unit(psi, a.dim_a))


def six_vectors(
    psi1: npt.ArrayLike, psi2: npt.ArrayLike, alpha: float, beta: float
) -> tuple[ComplexMatrix, ...]:
    """Return psi_1 .. psi_6 of the constancy argument."""
    v1 = np.asarray(psi1, dtype=np.complex128).ravel()
    v2 = np.asarray(psi2, dtype=np.complex128).ravel()
    phase = np.exp(1j * beta)
    v3 = (v1 + 1j * phase * v2) / np.sqrt(2.0)
    v4 = (v1 - 1j * phase * v2) / np.sqrt(2.0)
    v5 = np.cos(alpha) * v1 + np.sin(alpha) * phase * v2
    v6 = np.sin(alpha) * v1 - np.cos(alpha) * phase * v2
    return v1, v2, v3, v4, v5, v6


@dataclass(frozen=True)
class ConstancyReport:
    """
    Outcome of the six-vector test.

    Attributes:
        rho_b: The six extracted B factors, in vector order.
        spread: Largest entrywise distance between two of them.
        worst_pair: 1-based labels of the pair attaining ``spread``.
        mixture_residual: Failure of the identities
            L(P1 + P2) = L(P3 + P4) = L(P5 + P6).
        partial_mean_residual: Failure of rho(1) = rho(2) = (rho(3) + rho(4))/2,
            rho(3) = (rho(1) + rho(2))/2 and the same relations for 3..6.
        overlaps: 6 x 6 table of |<psi_i|psi_j>|^2.
        hypotheses_hold: Every assigned matrix is positive to 1e-9.
    """

    rho_b: tuple[ComplexMatrix, ...]
    spread: float
    worst_pair: tuple[int, int]
    mixture_residual: float
    partial_mean_residual: float
    overlaps: npt.NDArray[np.float64]
    hypotheses_hold: bool


def _max_abs(m: npt.ArrayLike) -> float:
    return float(np.max(np.abs(np.asarray(m))))


def _partial_mean_residual(
    rho: tuple[ComplexMatrix, ...], quad: tuple[int, int, int, int]
) -> float:
    i, j, k, m = quad
    return max(
        _max_abs(rho[i] - 0.5 * (rho[k] + rho[m])),
        _max_abs(rho[j] - 0.5 * (rho[k] + rho[m])),
        _max_abs(rho[k] - 0.5 * (rho[i] + rho[j])),
    )


def check_constant_rho_B(
    a: AssignmentMap,
    psi1: npt.ArrayLike,
    psi2: npt.ArrayLike,
    alpha: float,
    beta: float,
) -> ConstancyReport:
    """
    Check that the B factor is the same along the six-vector construction.

    Raises:
        ValueError: If ``psi1`` and ``psi2`` are not orthonormal.
    """
    v1 = _unit(psi1, a.dim_a, "psi1")
    v2 = _unit(psi2, a.dim_a, "psi2")
    if abs(np.vdot(v1, v2)) > UNIT_TOL:
        raise ValueError(f"psi1 and psi2 are not orthogonal (overlap {abs(np.vdot(v1, v2)):.3e})")

    vectors = six_vectors(v1, v2, alpha, beta)
    checks = [_factorize(a, v) for v in vectors]
    rho = tuple(c.rho_b for c in checks)

    spread, worst = 0.0, (1, 1)
    for i, j in combinations(range(6), 2):
        d = _max_abs(rho[i] - rho[j])
        if d > spread:
            spread, worst = d, (i + 1, j + 1)

    proj = [ket_projector(v) for v in vectors]
    assigned = [a.apply(p) for p in proj]
    mixture = max(
        _max_abs(proj[0] + proj[1] - proj[2] - proj[3]),
        _max_abs(proj[2] + proj[3] - proj[4] - proj[5]),
        _max_abs(assigned[0] + assigned[1] - assigned[2] - assigned[3]),
        _max_abs(assigned[2] + assigned[3] - assigned[4] - assigned[5]),
    )
    partial_means = max(
        _partial_mean_residual(rho, (0, 1, 2, 3)),
        _partial_mean_residual(rho, (2, 3, 4, 5)),
    )
    gram = np.array([[np.vdot(u, v) for v in vectors] for u in vectors])
    return ConstancyReport(
        rho_b=rho,
        spread=spread,
        worst_pair=worst,
        mixture_residual=0.5 * mixture,
        partial_mean_residual=partial_means,
        overlaps=np.abs(gram) ** 2,
        hypotheses_hold=all(c.hypothesis_holds for c in checks),
    )


@dataclass(frozen=True)
class PositivityHunt:
    """Most negative assigned eigenvalue found by the search, and where."""

    state: ComplexMatrix
    min_eigenvalue: float
    scanned: int

    @property
    def violation_found(self) -> bool:
        return self.min_eigenvalue < -POSITIVITY_TOL


def _structured_states(dim: int) -> list[ComplexMatrix]:
    basis = np.eye(dim, dtype=np.complex128)
    states: list[ComplexMatrix] = []
    for j, k in combinations(range(dim), 2):
        for alpha in _ALPHA_GRID:
            for beta in _BETA_GRID:
                states.extend(six_vectors(basis[j], basis[k], float(alpha), float(beta)))
    return states


def hunt_positivity_failure(
    a: AssignmentMap,
    samples: int = DEFAULT_SAMPLES,
    seed: int = 0,
    progress: bool = False,
) -> PositivityHunt:
    """
    Search pure states for the most negative assigned eigenvalue.

    Scans ``samples`` seeded random pure states plus the six-vector states over
    an (alpha, beta) grid for every pair of basis vectors.
    """
    rng = np.random.default_rng(seed)
    states = [random_pure_state(a.dim_a, rng) for _ in range(samples)]
    states.extend(_structured_states(a.dim_a))
    logger.info("Scanning %d pure states for assigned positivity", len(states))

    worst_state, worst = states[0], np.inf
    for vec in tqdm(states, desc="Positivity scan", disable=not progress):
        lam = eig_hermitian(a.apply(ket_projector(vec))).min_eigenvalue
        if lam < worst:
            worst_state, worst = vec, lam
    return PositivityHunt(state=worst_state, min_eigenvalue=float(worst), scanned=len(states))


def max_factorization_residual(a: AssignmentMap, samples: int, seed: int = 0) -> float:
    """Largest pure-state factorization residual over seeded random states."""
    rng = np.random.default_rng(seed)
    return max(
        (_factorize(a, random_pure_state(a.dim_a, rng)).residual for _ in range(samples)),
        default=0.0,
    )


def is_product_assignment(
    a: AssignmentMap, samples: int = FACTORIZATION_SAMPLES, seed: int = 0
) -> bool:
    """Operational product test: every sampled factorization residual is at most 1e-8."""
    return max_factorization_residual(a, samples, seed) <= PRODUCT_TOL


def _linearity_residual(a: AssignmentMap, rng: np.random.Generator, trials: int = 8) -> float:
    worst = 0.0
    for _ in range(trials):
        x = random_density_matrix(a.dim_a, rng)
        y = random_density_matrix(a.dim_a, rng)
        s, t = rng.uniform(-1.0, 1.0, 2)
        worst = max(worst, _max_abs(a.apply(s * x + t * y) - s * a.apply(x) - t * a.apply(y)))
    return worst


def _max_spread(a: AssignmentMap, rng: np.random.Generator, pairs: int) -> ConstancyReport:
    worst: ConstancyReport | None = None
    for _ in range(pairs):
        u = random_unitary(a.dim_a, rng)
        alpha, beta = rng.uniform(0.0, np.pi), rng.uniform(0.0, 2.0 * np.pi)
        report = check_constant_rho_B(a, u[:, 0], u[:, 1], alpha, beta)
        if worst is None or report.spread > worst.spread:
            worst = report
    assert worst is not None
    return worst


@dataclass(frozen=True)
class TheoremRun:
    """Everything ``verify_theorem`` measured, alongside its check report."""

    result: ValidationResult
    hunt: PositivityHunt
    factorization_residual: float
    constancy: ConstancyReport
    product: bool

    def as_dict(self) -> dict[str, Any]:
        return {
            **self.result.as_dict(),
            "product": self.product,
            "min_eigenvalue": self.hunt.min_eigenvalue,
            "worst_state": self.hunt.state,
            "states_scanned": self.hunt.scanned,
            "max_factorization_residual": self.factorization_residual,
            "max_rho_b_spread": self.constancy.spread,
            "worst_pair": list(self.constancy.worst_pair),
            "partial_mean_residual": self.constancy.partial_mean_residual,
        }


def verify_theorem(
    a: AssignmentMap,
    samples: int = DEFAULT_SAMPLES,
    seed: int = 0,
    progress: bool = False,
) -> TheoremRun:
    """
    Run the full chain on one assignment.

    Checks:
        partial_trace_consistency: Tr_B[L(F)] = F on the basis of A.
        linearity: L(sX + tY) = sL(X) + tL(Y) on random combinations.
        theorem_chain: if no pure state is assigned a non-positive matrix and
            pure states factorize, the six B factors agree; otherwise the
            assignment is not a product.
    """
    if samples < 1:
        raise ValueError(f"samples must be positive, got {samples}")
    rng = np.random.default_rng(seed)
    n, m = a.dims
    result = ValidationResult(subject=f"assignment dimA={n} dimB={m}")

    result.add(
        check_at_most(
            "partial_trace_consistency", a.partial_trace_residual(), PARTIAL_TRACE_TOL
        )
    )
    result.add(check_at_most("linearity", _linearity_residual(a, rng), LINEARITY_TOL))

    hunt = hunt_positivity_failure(a, samples=samples, seed=seed, progress=progress)
    residual = max_factorization_residual(a, FACTORIZATION_SAMPLES, seed=seed + 1)
    constancy = _max_spread(a, rng, CONSTANCY_PAIRS)
    product = residual <= PRODUCT_TOL
    hypotheses = not hunt.violation_found and residual < HYPOTHESIS_TOL

    if hypotheses:
        passed = constancy.spread < HYPOTHESIS_TOL
        actual = f"hypotheses hold; max rho_B spread {constancy.spread:.3e}"
    else:
        passed = not product
        actual = (
            f"positivity fails (min eigenvalue {hunt.min_eigenvalue:.3e}); "
            f"product={product}"
        )
    result.add(
        ValidationCheck(
            name="theorem_chain",
            expected="fixed product, or a located positivity failure",
            actual=actual,
            passed=passed,
            details=f"{hunt.scanned} states scanned, worst pair {constancy.worst_pair}",
        )
    )
    logger.info("Theorem chain on %dx%d assignment: product=%s", n, m, product)
    return TheoremRun(result, hunt, residual, constancy, product)
