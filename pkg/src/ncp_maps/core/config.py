"""Configuration dataclasses and numerical tolerances."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

# Per-entry tolerance for accepting a matrix as Hermitian.
HERMITIAN_TOL = 1e-12
# Max-entry error allowed when reconstructing a matrix or a map.
RECONSTRUCTION_TOL = 1e-10
# Default lower bound (negated) for the least eigenvalue of a positive matrix.
PSD_TOL = 1e-10
# Eigenvalues of B below this magnitude produce no Kraus term.
KRAUS_CUTOFF = 1e-12
# Off-diagonal Frobenius norm at which the Jacobi sweeps stop.
JACOBI_TOL = 1e-13
JACOBI_MAX_SWEEPS = 100
# Environment dimensions beyond this are refused by the transfer-matrix builder.
MAX_ENV_DIM = 4

OUTPUT_FORMATS = ("csv", "json")


@dataclass
class RunConfig:
    """
    Configuration for one CLI run.

    Attributes:
        command: Name of the command being run (e.g. "eigencurve").
        a1: Drive parameter a1 = -<Sigma2 Xi1>.
        a2: Drive parameter a2 = <Sigma1 Xi1>.
        omega_t: Phase omega*t in radians.
        c: Correlation magnitude <Sigma+ Xi1> used by the domain commands.
        grid_step: Spatial (or angular, for curves) sampling step.
        t_samples: Number of phases sampled over [0, 2*pi).
        output_path: Where the command writes its table or report.
        fmt: Output format, "csv" or "json".
        seed: Seed for every randomized check.
        max_env_dim: Largest environment dimension accepted by reductions.
    """

    command: str
    a1: float = 0.0
    a2: float = 0.0
    omega_t: float = 0.0
    c: float = 0.0
    grid_step: float = 0.05
    t_samples: int = 720
    output_path: Path | None = None
    fmt: str = "csv"
    seed: int = 0
    max_env_dim: int = MAX_ENV_DIM

    def __post_init__(self) -> None:
        if not 0.0 < self.grid_step <= 0.5:
            raise ValueError(f"grid_step must be in (0, 0.5], got {self.grid_step}")
        if self.t_samples < 8:
            raise ValueError(f"t_samples must be at least 8, got {self.t_samples}")
        if self.fmt not in OUTPUT_FORMATS:
            raise ValueError(f"format must be one of {OUTPUT_FORMATS}, got {self.fmt!r}")
        if self.a1**2 + self.a2**2 > 1.0 + HERMITIAN_TOL:
            raise ValueError(
                f"a1^2 + a2^2 must not exceed 1, got {self.a1**2 + self.a2**2:.6g}"
            )
        if not 0.0 <= self.c < 1.0:
            raise ValueError(f"c must be in [0, 1), got {self.c}")
        if self.max_env_dim < 1:
            raise ValueError(f"max_env_dim must be positive, got {self.max_env_dim}")
