"""
Two qubits Sigma and Xi coupled by H = (omega / 2) Sigma_3 Xi_1.

The reduced dynamics of Sigma depends on the initial correlations through

    a1 = -<Sigma_2 Xi_1>,   a2 = <Sigma_1 Xi_1>,   a = a1 + i a2,

and sends the mean values to

    s1' = s1 cos(wt) + a1 sin(wt),  s2' = s2 cos(wt) + a2 sin(wt),  s3' = s3.

As a map of 2 x 2 matrices this is 1' = 1 + (a1 Sigma_1 + a2 Sigma_2) sin(wt),
Sigma_{1,2}' = Sigma_{1,2} cos(wt), Sigma_3' = Sigma_3. Its B-matrix has two
positive and two negative eigenvalues unless a = 0 or sin(wt) = 0.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Literal

import numpy as np
import numpy.typing as npt

from ncp_maps.core.config import HERMITIAN_TOL, KRAUS_CUTOFF, RECONSTRUCTION_TOL
from ncp_maps.core.hermmap import (
    KrausTerm,
    MatrixAction,
    MatrixMap,
    SignedKraus,
    apply,
    extend_with_identity,
    map_from_action,
)
from ncp_maps.core.matlin import (
    ComplexMatrix,
    RealVector,
    as_matrix,
    hs_inner,
    identity,
    ket_projector,
    pauli,
    tensor,
)

logger = logging.getLogger(__name__)

# Below this value of |a|^2 sin^2(wt) the closed-form eigenvectors degenerate.
_DEGENERATE = 1e-300
# |sin(wt)| below this counts as a multiple of pi.
_PHASE_TOL = 1e-12

MapClass = Literal["identity", "pi_rotation", "completely_positive", "not_completely_positive"]


@dataclass(frozen=True)
class CorrelationParams:
    """
    Drive parameters of the reduced map.

    Attributes:
        a1: -<Sigma_2 Xi_1> in the initial state.
        a2: <Sigma_1 Xi_1> in the initial state.
        omega_t: Phase omega * t in radians.
    """

    a1: float
    a2: float
    omega_t: float

    def __post_init__(self) -> None:
        if self.a1**2 + self.a2**2 > 1.0 + HERMITIAN_TOL:
            raise ValueError(
                f"a1^2 + a2^2 must not exceed 1, got {self.a1**2 + self.a2**2:.6g}"
            )

    @property
    def a(self) -> complex:
        return complex(self.a1, self.a2)

    @property
    def r2(self) -> float:
        return self.a1**2 + self.a2**2

    @property
    def r(self) -> float:
        return math.hypot(self.a1, self.a2)

    @property
    def sin(self) -> float:
        return math.sin(self.omega_t)

    @property
    def cos(self) -> float:
        return math.cos(self.omega_t)

    def at(self, omega_t: float) -> CorrelationParams:
        """Same correlations at another phase."""
        return CorrelationParams(self.a1, self.a2, omega_t)


@dataclass(frozen=True)
class BlochVector:
    """Mean values (<Sigma_1>, <Sigma_2>, <Sigma_3>)."""

    s1: float
    s2: float
    s3: float

    @classmethod
    def from_array(cls, v: npt.ArrayLike) -> BlochVector:
        s = np.asarray(v, dtype=np.float64).ravel()
        if s.shape != (3,):
            raise ValueError(f"Bloch vector needs three components, got {s.size}")
        return cls(float(s[0]), float(s[1]), float(s[2]))

    def as_array(self) -> RealVector:
        return np.array([self.s1, self.s2, self.s3], dtype=np.float64)

    @property
    def norm(self) -> float:
        return math.sqrt(self.s1**2 + self.s2**2 + self.s3**2)


def evolve_bloch(v: BlochVector, p: CorrelationParams) -> BlochVector:
    """Affine image of the mean values; s3 is unchanged."""
    s, c = p.sin, p.cos
    return BlochVector(v.s1 * c + p.a1 * s, v.s2 * c + p.a2 * s, v.s3)


def map_action(p: CorrelationParams) -> MatrixAction:
    """The reduced map as a function on 2 x 2 matrices, built from the Pauli expansion."""
    s, c = p.sin, p.cos
    one = identity(2)
    drive = p.a1 * pauli(1) + p.a2 * pauli(2)
    sig = [pauli(k) for k in (1, 2, 3)]

    def action(q: ComplexMatrix) -> ComplexMatrix:
        mat = as_matrix(q)
        q0 = np.trace(mat)
        qk = [hs_inner(sk, mat) for sk in sig]
        out = q0 * (one + s * drive) + c * qk[0] * sig[0] + c * qk[1] * sig[1] + qk[2] * sig[2]
        return 0.5 * out

    return action


def reduced_map(p: CorrelationParams) -> MatrixMap:
    """
    The B-matrix of the reduced map.

    Rows and columns run 11, 12, 21, 22:

        [[1,          0,          a* s / 2,  c       ],
         [0,          0,          0,         a* s / 2],
         [a s / 2,    0,          0,         0       ],
         [c,          a s / 2,    0,         1       ]]

    with s = sin(wt) and c = cos(wt).
    """
    s, c = p.sin, p.cos
    h = 0.5 * p.a * s
    hc = h.conjugate()
    b = np.array(
        [
            [1.0, 0.0, hc, c],
            [0.0, 0.0, 0.0, hc],
            [h, 0.0, 0.0, 0.0],
            [c, h, 0.0, 1.0],
        ],
        dtype=np.complex128,
    )
    return MatrixMap(2, b)


@dataclass(frozen=True)
class AnalyticEigensystem:
    """
    Closed-form eigensystem of B, labelled 1..4 as in the formulas.

    lambda_1, lambda_2 >= 0 >= lambda_3, lambda_4. The labels come from the
    closed form, not from sorting: when cos(wt) < 0, lambda_2 > lambda_1 and
    lambda_3 < lambda_4. Columns of ``eigenvectors`` are normalized and follow
    the same labels.
    """

    eigenvalues: RealVector
    eigenvectors: ComplexMatrix

    @property
    def min_eigenvalue(self) -> float:
        return float(min(self.eigenvalues[2], self.eigenvalues[3]))

    def projector(self, label: int) -> ComplexMatrix:
        """|psi_label><psi_label| for label in 1..4."""
        return ket_projector(self.eigenvectors[:, label - 1])


def _root_pair(center: float, product: float) -> tuple[float, float]:
    """Roots of x^2 - center x + product = 0; the cancelling root comes from the product."""
    big = 0.5 * (center + math.sqrt(center * center - 4.0 * product))
    small = product / big if big > 0.0 else 0.0
    return big, small


def analytic_eigensystem(p: CorrelationParams) -> AnalyticEigensystem:
    """
    Closed-form eigenvalues and eigenvectors of ``reduced_map(p).b_matrix``.

    lambda_{1,3} = (1 + c +- sqrt((1 + c)^2 + |a|^2 s^2)) / 2 and
    lambda_{2,4} = (1 - c +- sqrt((1 - c)^2 + |a|^2 s^2)) / 2, so
    lambda_1 lambda_3 = lambda_2 lambda_4 = -|a|^2 s^2 / 4.
    """
    s, c = p.sin, p.cos
    k = p.r2 * s * s
    lam1, lam3 = _root_pair(1.0 + c, -0.25 * k)
    lam2, lam4 = _root_pair(1.0 - c, -0.25 * k)
    values = np.array([lam1, lam2, lam3, lam4], dtype=np.float64)

    if k < _DEGENERATE:
        u = p.a / abs(p.a) if p.r2 > 0.0 else 1.0 + 0.0j
        vecs = np.array(
            [
                [1.0, 0.0, 0.0, 1.0],
                [1.0, 0.0, 0.0, -1.0],
                [0.0, np.conj(u), u, 0.0],
                [0.0, -np.conj(u), u, 0.0],
            ],
            dtype=np.complex128,
        ).T / math.sqrt(2.0)
        return AnalyticEigensystem(eigenvalues=values, eigenvectors=vecs)

    h = 0.5 * p.a * s
    hc = h.conjugate()
    columns = []
    for label, lam in enumerate(values, start=1):
        if label in (1, 3):
            psi = np.array([lam, hc, h, lam], dtype=np.complex128)
        else:
            psi = np.array([lam, -hc, h, -lam], dtype=np.complex128)
        columns.append(psi / math.sqrt(2.0 * (lam * lam + 0.25 * k)))
    return AnalyticEigensystem(eigenvalues=values, eigenvectors=np.column_stack(columns))


def analytic_kraus(p: CorrelationParams, cutoff: float = KRAUS_CUTOFF) -> SignedKraus:
    """
    Closed-form signed Kraus matrices C(1)..C(4).

    C(n) = sqrt(|lambda_n| / |psi_n|^2) [lambda_n + (a1 Sigma_1 + a2 Sigma_2) s / 2] for n = 1, 3
    C(n) = sqrt(|lambda_n| / |psi_n|^2) [lambda_n Sigma_3 + i (a2 Sigma_1 - a1 Sigma_2) s / 2]
    for n = 2, 4. When a = 0 (or sin(wt) = 0) only C(1) = sqrt((1 + c) / 2) and
    C(2) = sqrt((1 - c) / 2) Sigma_3 remain. Terms with |lambda| < ``cutoff`` are dropped.
    """
    s, c = p.sin, p.cos
    k = p.r2 * s * s
    es = analytic_eigensystem(p)
    one, s1, s2, s3 = identity(2), pauli(1), pauli(2), pauli(3)
    terms: list[KrausTerm] = []

    if k < _DEGENERATE:
        candidates = [
            (float(es.eigenvalues[0]), math.sqrt(max(0.0, 0.5 * (1.0 + c))) * one),
            (float(es.eigenvalues[1]), math.sqrt(max(0.0, 0.5 * (1.0 - c))) * s3),
        ]
        for lam, mat in candidates:
            if abs(lam) >= cutoff:
                terms.append(KrausTerm(sign=1, eigenvalue=lam, matrix=mat))
        return SignedKraus(dim=2, terms=tuple(terms))

    even = 0.5 * s * (p.a1 * s1 + p.a2 * s2)
    odd = 0.5j * s * (p.a2 * s1 - p.a1 * s2)
    for label, lam in enumerate(es.eigenvalues, start=1):
        if abs(lam) < cutoff:
            logger.debug("Dropping C(%d), eigenvalue %.3e", label, lam)
            continue
        scale = math.sqrt(abs(lam) / (2.0 * (lam * lam + 0.25 * k)))
        mat = lam * one + even if label in (1, 3) else lam * s3 + odd
        sign = 1 if label <= 2 else -1
        terms.append(KrausTerm(sign=sign, eigenvalue=float(lam), matrix=scale * mat))
    return SignedKraus(dim=2, terms=tuple(terms))


@dataclass(frozen=True)
class SmallTimeSeries:
    """Leading-order expansions of the eigenvalues and C(n) for small wt."""

    eigenvalues: RealVector
    kraus: tuple[ComplexMatrix, ComplexMatrix, ComplexMatrix, ComplexMatrix]


def small_t_series(p: CorrelationParams) -> SmallTimeSeries:
    """
    Series of lambda_n and C(n) in x = wt.

    lambda_1 = 2 - x^2/2 + |a|^2 x^2/8,  lambda_2 = |a| x/2 + x^2/4 + x^3/(16|a|),
    lambda_3 = -|a|^2 x^2/8,  lambda_4 = -|a| x/2 + x^2/4 - x^3/(16|a|).

    Raises:
        ValueError: If a = 0 or wt <= 0.
    """
    r = p.r
    x = p.omega_t
    if r == 0.0:
        raise ValueError("Small-time series requires a nonzero correlation |a|")
    if x <= 0.0:
        raise ValueError(f"Small-time series requires wt > 0, got {x}")
    k = r * r
    lam = np.array(
        [
            2.0 - 0.5 * x**2 + k * x**2 / 8.0,
            0.5 * r * x + 0.25 * x**2 + x**3 / (16.0 * r),
            -k * x**2 / 8.0,
            -0.5 * r * x + 0.25 * x**2 - x**3 / (16.0 * r),
        ],
        dtype=np.float64,
    )
    one, s1, s2, s3 = identity(2), pauli(1), pauli(2), pauli(3)
    drive = p.a1 * s1 + p.a2 * s2
    cross = math.sqrt(1.0 / (8.0 * r)) * math.sqrt(x) * (1j * p.a2 * s1 - 1j * p.a1 * s2)
    root = math.sqrt(r / 8.0)
    c1 = (1.0 - x**2 / 8.0) * one + 0.25 * x * drive
    c2 = root * (math.sqrt(x) + x**1.5 / (2.0 * r)) * s3 + cross
    c3 = -(k * x**2 / 16.0) * one + 0.25 * x * drive
    c4 = root * (-math.sqrt(x) + x**1.5 / (2.0 * r)) * s3 + cross
    return SmallTimeSeries(eigenvalues=lam, kraus=(c1, c2, c3, c4))


def witness_P(p: CorrelationParams) -> tuple[ComplexMatrix, float]:
    """
    Image of the north-pole projector P = (1 + Sigma_3) / 2.

    P' = (1 + (a1 Sigma_1 + a2 Sigma_2) sin(wt) + Sigma_3) / 2 has least
    eigenvalue (1 - sqrt(1 + |a|^2 sin^2(wt))) / 2, negative whenever a != 0
    and sin(wt) != 0.

    Returns:
        (P', closed-form least eigenvalue)
    """
    north = 0.5 * (identity(2) + pauli(3))
    image = apply(reduced_map(p), north)
    return image, 0.5 * (1.0 - math.sqrt(1.0 + p.r2 * p.sin**2))


def witness_operator_W() -> ComplexMatrix:
    """W = (1 + Sigma_2 / sqrt 2 + Sigma_3 Xi_3 / sqrt 2) / 4, a density matrix with W^2 = W / 2."""
    root = 1.0 / math.sqrt(2.0)
    return 0.25 * (
        identity(4) + root * tensor(pauli(2), identity(2)) + root * tensor(pauli(3), pauli(3))
    )


def witness_W(sigma1_xi1: float, sigma3_xi3: float) -> float:
    """
    Tr[Pi' W] at wt = pi/2 from the correlations of the initial state.

    Equals (1 + <Sigma_1 Xi_1>/sqrt 2 + <Sigma_3 Xi_3>/sqrt 2) / 4.

    Raises:
        ArithmeticError: If W fails W^2 = W / 2 numerically.
    """
    w = witness_operator_W()
    if np.max(np.abs(w @ w - 0.5 * w)) > RECONSTRUCTION_TOL:
        raise ArithmeticError("W^2 = W/2 does not hold")
    root = math.sqrt(2.0)
    return 0.25 * (1.0 + sigma1_xi1 / root + sigma3_xi3 / root)


def singlet_state() -> ComplexMatrix:
    """Projector onto (|01> - |10>) / sqrt 2, with <Sigma_j Xi_j> = -1."""
    return ket_projector(np.array([0.0, 1.0, -1.0, 0.0]) / math.sqrt(2.0))


def correlation_params(pi: npt.ArrayLike, omega_t: float) -> CorrelationParams:
    """Read a1 = -<Sigma_2 Xi_1> and a2 = <Sigma_1 Xi_1> off a two-qubit state."""
    state = as_matrix(pi)
    a1 = -hs_inner(tensor(pauli(2), pauli(1)), state).real
    a2 = hs_inner(tensor(pauli(1), pauli(1)), state).real
    return CorrelationParams(a1, a2, omega_t)


def extended_witness_value(pi: npt.ArrayLike, p: CorrelationParams) -> float:
    """Tr[((map x id) Pi) W] for the reduced map with parameters ``p``."""
    extended = extend_with_identity(reduced_map(p), 2)
    image = apply(extended, pi)
    return float(hs_inner(witness_operator_W(), image).real)


def product_state_map(xi1: float) -> MatrixMap:
    """
    Completely positive map for a product initial state at wt = pi/2.

    1' = 1, Sigma_1' = <Xi_1> Sigma_2, Sigma_2' = -<Xi_1> Sigma_1, Sigma_3' = Sigma_3.

    Raises:
        ValueError: If |<Xi_1>| > 1.
    """
    if abs(xi1) > 1.0:
        raise ValueError(f"<Xi_1> must lie in [-1, 1], got {xi1}")
    s1, s2, s3 = pauli(1), pauli(2), pauli(3)

    def action(q: ComplexMatrix) -> ComplexMatrix:
        q0 = np.trace(q)
        q1, q2, q3 = hs_inner(s1, q), hs_inner(s2, q), hs_inner(s3, q)
        return 0.5 * (q0 * identity(2) + xi1 * q1 * s2 - xi1 * q2 * s1 + q3 * s3)

    return map_from_action(2, action)


def is_exceptional(p: CorrelationParams) -> bool:
    """True when the map is completely positive: a = 0 or sin(wt) = 0."""
    return p.r2 == 0.0 or abs(p.sin) < _PHASE_TOL


def classify(p: CorrelationParams) -> MapClass:
    """Name the member of the family: identity, pi rotation, other CP map, or not CP."""
    if abs(p.sin) < _PHASE_TOL:
        return "identity" if p.cos > 0.0 else "pi_rotation"
    if p.r2 == 0.0:
        return "completely_positive"
    return "not_completely_positive"
