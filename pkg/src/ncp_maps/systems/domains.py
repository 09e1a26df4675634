"""
Compatibility and positivity domains of the two-qubit reduced map.

Given the correlations a1 = c cos(alpha), a2 = c sin(alpha), the mean values of
Sigma are written in the rotated components

    s_plus = <Sigma_+>,  Sigma_+ = (a2 Sigma_1 - a1 Sigma_2) / c
    s_minus = <Sigma_->, Sigma_- = -(a1 Sigma_1 + a2 Sigma_2) / c

so that <Sigma_+ Xi_1> = c and <Sigma_- Xi_1> = 0. The compatibility domain is

    sqrt((s_-^2 + s_+^2 + c^2)^2 - 4 s_+^2 c^2) <= 2 - 2 s_3^2 - s_-^2 - s_+^2 - c^2

with the right side nonnegative. It does not depend on alpha or on time, and it
equals the intersection of the positivity domains over all wt.
"""

from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass
from typing import Any, Literal

import numpy as np
import numpy.typing as npt
import pandas as pd
from tqdm.auto import tqdm

from ncp_maps.core.matlin import ComplexMatrix, identity, pauli, tensor

from .twoqubit import BlochVector, CorrelationParams, evolve_bloch

logger = logging.getLogger(__name__)

# Slack allowed on membership inequalities for points exactly on a boundary.
MEMBERSHIP_TOL = 1e-12
# Rows per block in the vectorized time scan.
_SCAN_BLOCK = 4096

SectionName = Literal["minus3", "plusminus", "plus3", "product"]
SECTIONS: tuple[str, ...] = ("minus3", "plusminus", "plus3", "product", "grid3d")

FloatArray = npt.NDArray[np.float64]


@dataclass(frozen=True)
class RotatedBloch:
    """Mean values (<Sigma_+>, <Sigma_->, <Sigma_3>)."""

    s_plus: float
    s_minus: float
    s3: float

    def as_array(self) -> FloatArray:
        return np.array([self.s_plus, self.s_minus, self.s3], dtype=np.float64)

    @property
    def norm(self) -> float:
        return math.sqrt(self.s_plus**2 + self.s_minus**2 + self.s3**2)


@dataclass(frozen=True)
class DomainSpec:
    """
    Fixed correlation <Sigma_+ Xi_1> = c and its direction alpha.

    Raises:
        ValueError: If c is outside [0, 1).
    """

    c: float
    alpha: float = 0.0

    def __post_init__(self) -> None:
        if not 0.0 <= self.c < 1.0:
            raise ValueError(f"c must be in [0, 1), got {self.c}")

    @classmethod
    def from_params(cls, p: CorrelationParams) -> DomainSpec:
        return cls(c=p.r, alpha=math.atan2(p.a2, p.a1))

    @property
    def a1(self) -> float:
        return self.c * math.cos(self.alpha)

    @property
    def a2(self) -> float:
        return self.c * math.sin(self.alpha)

    def params(self, omega_t: float) -> CorrelationParams:
        return CorrelationParams(self.a1, self.a2, omega_t)

    def axes(self) -> tuple[tuple[float, float], tuple[float, float]]:
        """Unit vectors e_plus, e_minus in the (s1, s2) plane; identity axes at c = 0."""
        if self.c == 0.0:
            return (1.0, 0.0), (0.0, 1.0)
        sa, ca = math.sin(self.alpha), math.cos(self.alpha)
        return (sa, -ca), (-ca, -sa)


def to_rotated(v: BlochVector, spec: DomainSpec) -> RotatedBloch:
    """Express (s1, s2) along Sigma_+ and Sigma_-; s3 is unchanged."""
    e_plus, e_minus = spec.axes()
    return RotatedBloch(
        s_plus=e_plus[0] * v.s1 + e_plus[1] * v.s2,
        s_minus=e_minus[0] * v.s1 + e_minus[1] * v.s2,
        s3=v.s3,
    )


def from_rotated(v: RotatedBloch, spec: DomainSpec) -> BlochVector:
    """Inverse of ``to_rotated``."""
    e_plus, e_minus = spec.axes()
    return BlochVector(
        s1=v.s_plus * e_plus[0] + v.s_minus * e_minus[0],
        s2=v.s_plus * e_plus[1] + v.s_minus * e_minus[1],
        s3=v.s3,
    )


def compatibility_mask(
    s_plus: npt.ArrayLike,
    s_minus: npt.ArrayLike,
    s3: npt.ArrayLike,
    c: float,
    tol: float = MEMBERSHIP_TOL,
) -> npt.NDArray[np.bool_]:
    """Vectorized membership in the compatibility domain."""
    sp = np.asarray(s_plus, dtype=np.float64)
    sm = np.asarray(s_minus, dtype=np.float64)
    z = np.asarray(s3, dtype=np.float64)
    q = sp * sp + sm * sm
    lhs = np.sqrt(np.maximum((q + c * c) ** 2 - 4.0 * sp * sp * c * c, 0.0))
    rhs = 2.0 - 2.0 * z * z - q - c * c
    return (rhs >= -tol) & (lhs <= rhs + tol)


def in_compatibility(v: RotatedBloch, c: float) -> bool:
    """True iff ``v`` is compatible with <Sigma_+ Xi_1> = c and <Sigma_- Xi_1> = 0."""
    if not 0.0 <= c < 1.0:
        raise ValueError(f"c must be in [0, 1), got {c}")
    return bool(compatibility_mask(v.s_plus, v.s_minus, v.s3, c))


def _rotated_paulis(alpha: float) -> tuple[ComplexMatrix, ComplexMatrix]:
    sa, ca = math.sin(alpha), math.cos(alpha)
    sigma_plus = sa * pauli(1) - ca * pauli(2)
    sigma_minus = -ca * pauli(1) - sa * pauli(2)
    return sigma_plus, sigma_minus


def compatibility_witness(v: RotatedBloch, c: float, alpha: float = 0.0) -> ComplexMatrix:
    """
    Two-qubit density matrix with marginal ``v`` and <Sigma_+ Xi_1> = c.

    Pi = (1 + s_- Sigma_- + s_3 Sigma_3 + s_+ Sigma_+ + c Sigma_+ Xi_1
          + x Xi_1 + s_3 x Sigma_3 Xi_1) / 4,   x = s_+ c / (1 - s_3^2).

    At s_3^2 = 1 the state is (1 + s_3 Sigma_3)/2 x 1/2.

    Raises:
        ValueError: If ``v`` is not in the compatibility domain.
    """
    if not in_compatibility(v, c):
        raise ValueError(f"{v} is not in the compatibility domain for c={c}")
    one, xi1 = identity(2), pauli(1)
    s3_op = pauli(3)
    if 1.0 - v.s3**2 <= MEMBERSHIP_TOL:
        return tensor(0.5 * (one + v.s3 * s3_op), 0.5 * one)
    sigma_plus, sigma_minus = _rotated_paulis(alpha)
    x = v.s_plus * c / (1.0 - v.s3**2)
    marginal = one + v.s_minus * sigma_minus + v.s3 * s3_op + v.s_plus * sigma_plus
    pi = (
        tensor(marginal, one)
        + c * tensor(sigma_plus, xi1)
        + x * tensor(one, xi1)
        + v.s3 * x * tensor(s3_op, xi1)
    )
    return 0.25 * pi


def in_product_region(v: RotatedBloch, c: float, tol: float = MEMBERSHIP_TOL) -> bool:
    """s_- = 0, s_+^2 >= c^2 and s_3^2 <= 1 - s_+^2: a compatible product state exists."""
    return (
        abs(v.s_minus) <= tol
        and v.s_plus**2 >= c * c - tol
        and v.s3**2 <= 1.0 - v.s_plus**2 + tol
    )


def product_state_witness(v: RotatedBloch, c: float, alpha: float = 0.0) -> ComplexMatrix:
    """
    Product state rho_Sigma x (1 + (c / s_+) Xi_1) / 2 compatible with ``v``.

    Raises:
        ValueError: If ``v`` is outside the product-state region.
    """
    if not in_product_region(v, c):
        raise ValueError(f"{v} admits no compatible product state for c={c}")
    sigma_plus, _ = _rotated_paulis(alpha)
    one = identity(2)
    rho = 0.5 * (one + v.s_plus * sigma_plus + v.s3 * pauli(3))
    xi = c / v.s_plus if c > 0.0 else 0.0
    return tensor(rho, 0.5 * (one + xi * pauli(1)))


def positivity_mask(
    s1: npt.ArrayLike,
    s2: npt.ArrayLike,
    s3: npt.ArrayLike,
    p: CorrelationParams,
    tol: float = MEMBERSHIP_TOL,
) -> npt.NDArray[np.bool_]:
    """Vectorized membership in the positivity domain at phase ``p.omega_t``."""
    x = np.asarray(s1, dtype=np.float64)
    y = np.asarray(s2, dtype=np.float64)
    z = np.asarray(s3, dtype=np.float64)
    s, c = p.sin, p.cos
    image = (x * c + p.a1 * s) ** 2 + (y * c + p.a2 * s) ** 2 + z * z
    return (x * x + y * y + z * z <= 1.0 + tol) & (image <= 1.0 + tol)


def in_positivity(v: BlochVector, p: CorrelationParams) -> bool:
    """True iff ``v`` and its image under the map both lie in the unit ball."""
    return bool(positivity_mask(v.s1, v.s2, v.s3, p))


def positivity_boundary(p: CorrelationParams, theta: float, phi: float) -> BlochVector:
    """
    Preimage of the unit-sphere point (theta, phi) under the map of mean values.

    The unit sphere moved by (-a1 tan wt, -a2 tan wt) and stretched by 1/cos wt
    in the s1, s2 directions.

    Raises:
        ValueError: If cos(wt) = 0; the domain is then the slab s_3^2 <= 1 - |a|^2.
    """
    c = p.cos
    if abs(c) < MEMBERSHIP_TOL:
        raise ValueError(
            "Positivity boundary degenerates at cos(wt) = 0; "
            f"the domain is the slab s3^2 <= {1.0 - p.r2:.6g} inside the unit ball"
        )
    t = p.sin / c
    st = math.sin(theta)
    return BlochVector(
        s1=-p.a1 * t + st * math.cos(phi) / c,
        s2=-p.a2 * t + st * math.sin(phi) / c,
        s3=math.cos(theta),
    )


def north_pole_excluded(p: CorrelationParams) -> bool:
    """True when the pure state <Sigma_3> = 1 is outside the positivity domain."""
    return not in_positivity(BlochVector(0.0, 0.0, 1.0), p)


def compatibility_boundary_point(c: float, s3: float, beta: float) -> RotatedBloch:
    """
    Point on the constant-s_3 boundary ellipse of the compatibility domain.

    s_+ = -sqrt(1 - s_3^2) sin(beta), s_- = -sqrt(1 - s_3^2 - c^2) cos(beta).

    Raises:
        ValueError: If s_3^2 > 1 - c^2.
    """
    room = 1.0 - s3 * s3 - c * c
    if room < -MEMBERSHIP_TOL:
        raise ValueError(f"s3={s3} exceeds the bound s3^2 <= 1 - c^2 for c={c}")
    return RotatedBloch(
        s_plus=-math.sqrt(1.0 - s3 * s3) * math.sin(beta),
        s_minus=-math.sqrt(max(room, 0.0)) * math.cos(beta),
        s3=s3,
    )


def boundary_time(c: float, s3: float, phi_minus_alpha: float) -> float:
    """
    Phase wt in [-pi/2, pi/2] whose positivity boundary touches the compatibility
    boundary at height s_3 in direction phi - alpha: sin(wt) = c cos(phi - alpha) / sqrt(1 - s_3^2).

    Raises:
        ValueError: If |sin(wt)| would exceed 1.
    """
    if s3 * s3 >= 1.0:
        raise ValueError("s3^2 must be below 1")
    value = c * math.cos(phi_minus_alpha) / math.sqrt(1.0 - s3 * s3)
    if abs(value) > 1.0 + MEMBERSHIP_TOL:
        raise ValueError(f"No phase reaches this point (sin(wt) = {value:.6g})")
    return math.asin(max(-1.0, min(1.0, value)))


def ellipse_residual(v: RotatedBloch, c: float) -> float:
    """s_-^2 / (1 - c^2 - s_3^2) + s_+^2 / (1 - s_3^2) - 1, zero on the boundary contours."""
    return v.s_minus**2 / (1.0 - c * c - v.s3**2) + v.s_plus**2 / (1.0 - v.s3**2) - 1.0


def grid_axis(step: float) -> FloatArray:
    """Symmetric sample points on [-1, 1] with spacing close to ``step``."""
    if not 0.0 < step <= 1.0:
        raise ValueError(f"grid step must be in (0, 1], got {step}")
    return np.linspace(-1.0, 1.0, int(round(2.0 / step)) + 1)


def _ball_points(step: float) -> tuple[FloatArray, FloatArray, FloatArray]:
    axis = grid_axis(step)
    sp, sm, s3 = np.meshgrid(axis, axis, axis, indexing="ij")
    sp, sm, s3 = sp.ravel(), sm.ravel(), s3.ravel()
    keep = sp * sp + sm * sm + s3 * s3 <= 1.0 + MEMBERSHIP_TOL
    return sp[keep], sm[keep], s3[keep]


def membership_grid(c: float, step: float) -> pd.DataFrame:
    """Grid points of the unit ball with their compatibility membership."""
    sp, sm, s3 = _ball_points(step)
    return pd.DataFrame(
        {
            "s_plus": sp,
            "s_minus": sm,
            "s3": s3,
            "in_domain": compatibility_mask(sp, sm, s3, c),
        }
    )


def _curve(name: str, u: FloatArray, v: FloatArray) -> pd.DataFrame:
    return pd.DataFrame({"section": name, "u": u, "v": v})


def compatibility_sections(c: float, section: SectionName, n_points: int = 361) -> pd.DataFrame:
    """
    Boundary curves of one section of the compatibility domain, plus the unit circle.

    minus3: circle s_-^2 + s_3^2 = 1 - c^2 at s_+ = 0 (u = s_-, v = s_3).
    plusminus: ellipse s_-^2 / (1 - c^2) + s_+^2 = 1 at s_3 = 0 (u = s_+, v = s_-).
    plus3: s_3^2 = 1 - max(s_+^2, c^2), circle arcs joined by chords (u = s_+, v = s_3).
    product: outline of the compatible product states in the (s_+, s_3) plane.

    Raises:
        ValueError: If the section name is unknown or c is outside [0, 1).
    """
    DomainSpec(c)
    angle = np.linspace(0.0, 2.0 * np.pi, n_points)
    unit = _curve("unit_circle", np.cos(angle), np.sin(angle))
    width = math.sqrt(1.0 - c * c)

    if section == "minus3":
        curve = _curve(section, width * np.cos(angle), width * np.sin(angle))
    elif section == "plusminus":
        curve = _curve(section, np.cos(angle), width * np.sin(angle))
    elif section == "plus3":
        u = np.linspace(-1.0, 1.0, n_points)
        top = np.sqrt(np.maximum(1.0 - np.maximum(u * u, c * c), 0.0))
        curve = _curve(section, np.concatenate([u, u[::-1]]), np.concatenate([top, -top[::-1]]))
    elif section == "product":
        pieces = []
        if c > 0.0:
            arc = np.linspace(-math.acos(c), math.acos(c), n_points)
            for sign, label in ((1.0, "product_plus"), (-1.0, "product_minus")):
                u = np.concatenate([sign * np.cos(arc), [sign * c]])
                v = np.concatenate([np.sin(arc), [np.sin(arc[0])]])
                pieces.append(_curve(label, u, v))
        else:
            pieces.append(_curve("product_plus", np.cos(angle), np.sin(angle)))
        curve = pd.concat(pieces, ignore_index=True)
    else:
        raise ValueError(f"Unknown section {section!r}; expected one of {SECTIONS}")
    return pd.concat([curve, unit], ignore_index=True)


def positivity_surface(p: CorrelationParams, n_theta: int, n_phi: int) -> pd.DataFrame:
    """
    Samples of the positivity boundary surface with a unit-ball clipping flag.

    At cos(wt) = 0 the surface is replaced by the two slab caps
    s_3 = +-sqrt(1 - |a|^2) sampled on the unit disk.
    """
    theta = np.linspace(0.0, np.pi, n_theta)
    phi = np.linspace(0.0, 2.0 * np.pi, n_phi, endpoint=False)
    tt, pp = np.meshgrid(theta, phi, indexing="ij")
    tt, pp = tt.ravel(), pp.ravel()
    c = p.cos
    if abs(c) < MEMBERSHIP_TOL:
        height = math.sqrt(max(1.0 - p.r2, 0.0))
        radius = np.sin(tt) * math.sqrt(max(1.0 - height * height, 0.0))
        s1, s2 = radius * np.cos(pp), radius * np.sin(pp)
        s3 = np.where(tt <= np.pi / 2, height, -height)
    else:
        points = np.array(
            [
                positivity_boundary(p, float(th), float(ph)).as_array()
                for th, ph in zip(tt, pp, strict=True)
            ]
        )
        s1, s2, s3 = points[:, 0], points[:, 1], points[:, 2]
    return pd.DataFrame(
        {
            "theta": tt,
            "phi": pp,
            "s1": s1,
            "s2": s2,
            "s3": s3,
            "in_unit_ball": s1 * s1 + s2 * s2 + s3 * s3 <= 1.0 + MEMBERSHIP_TOL,
        }
    )


@dataclass
class DomainScanReport:
    """
    Outcome of the grid comparison between compatibility and positivity.

    Attributes:
        c: The correlation magnitude.
        grid_step: Spatial step per axis.
        t_samples: Number of phases sampled over [0, 2 pi).
        in_ball: Grid points inside the unit ball.
        compatible: Points in the compatibility domain.
        interior_violations: Compatible points that fail positivity at a sampled phase.
        exterior_violations: Incompatible points that pass every sampled phase and
            are not within one grid step of the compatibility boundary.
        boundary_exceptions: Incompatible points that pass every sampled phase but
            lie within one grid step of the boundary.
    """

    c: float
    grid_step: float
    t_samples: int
    in_ball: int = 0
    compatible: int = 0
    interior_violations: int = 0
    exterior_violations: int = 0
    boundary_exceptions: int = 0

    @property
    def passed(self) -> bool:
        return self.interior_violations == 0 and self.exterior_violations == 0

    def as_dict(self) -> dict[str, Any]:
        payload = asdict(self)
        payload["passed"] = self.passed
        return payload


def intersection_equals_compatibility(
    c: float,
    grid_step: float = 0.02,
    t_samples: int = 720,
    progress: bool = False,
) -> DomainScanReport:
    """
    Check on a grid that compatibility equals membership in every positivity domain.

    The image at phase wt has rotated components (s_+ cos, s_- cos - c sin, s_3),
    independent of alpha, so the scan runs in the rotated frame.

    Args:
        c: Correlation magnitude in [0, 1).
        grid_step: Spatial step per axis.
        t_samples: Phases sampled uniformly over [0, 2 pi).
        progress: Show a progress bar over point blocks.

    Returns:
        DomainScanReport with the violation counts.
    """
    DomainSpec(c)
    if t_samples < 8:
        raise ValueError(f"t_samples must be at least 8, got {t_samples}")
    sp, sm, s3 = _ball_points(grid_step)
    compat = compatibility_mask(sp, sm, s3, c)
    phases = 2.0 * np.pi * np.arange(t_samples) / t_samples
    cos_t, sin_t = np.cos(phases), np.sin(phases)

    worst = np.empty(sp.size)
    starts = range(0, sp.size, _SCAN_BLOCK)
    logger.info(
        "Scanning %d grid points over %d phases (c=%.6g, step=%.3g)",
        sp.size,
        t_samples,
        c,
        grid_step,
    )
    for start in tqdm(starts, desc="positivity scan", disable=not progress):
        block = slice(start, start + _SCAN_BLOCK)
        plus = np.outer(sp[block], cos_t)
        minus = np.outer(sm[block], cos_t) - c * sin_t
        worst[block] = np.max(plus * plus + minus * minus, axis=1) + s3[block] ** 2
    always_positive = worst <= 1.0 + MEMBERSHIP_TOL

    radius = np.sqrt(sp * sp + sm * sm + s3 * s3)
    shrink = np.where(radius > grid_step, 1.0 - grid_step / np.maximum(radius, grid_step), 0.0)
    near = compatibility_mask(sp * shrink, sm * shrink, s3 * shrink, c)

    outside_pass = ~compat & always_positive
    report = DomainScanReport(
        c=c,
        grid_step=grid_step,
        t_samples=t_samples,
        in_ball=int(sp.size),
        compatible=int(compat.sum()),
        interior_violations=int((compat & ~always_positive).sum()),
        exterior_violations=int((outside_pass & ~near).sum()),
        boundary_exceptions=int((outside_pass & near).sum()),
    )
    logger.info("Domain scan: %s", report.as_dict())
    return report


def evolve_rotated(v: RotatedBloch, spec: DomainSpec, omega_t: float) -> RotatedBloch:
    """Image of ``v`` at phase ``omega_t`` in the rotated frame."""
    image = evolve_bloch(from_rotated(v, spec), spec.params(omega_t))
    return to_rotated(image, spec)
