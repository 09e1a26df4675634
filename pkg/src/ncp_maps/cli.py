"""
Command-line interface for not-completely-positive reduced maps.

Usage:
    # Show help
    ncp-maps --help

    # Eigenvalue curves, domain sections and positivity surfaces
    ncp-maps eigencurve --a1 -0.5 --a2 0.5 --out eigen.csv
    ncp-maps domain --c 0.7071 --section plusminus --out ellipse.csv
    ncp-maps positivity --a1 -0.5 --a2 0.5 --omega-t 0.31 --format json

    # Maps from files
    ncp-maps decompose map.json
    ncp-maps reduce hamiltonian.json --t 1.57 --env-means means.json
    ncp-maps pechukas assignment.json --samples 10000 --seed 0

    # Verification runs
    ncp-maps scan --c 0.7071 --grid-step 0.02 --progress
    ncp-maps validate
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable
from pathlib import Path
from typing import Any, TypeVar, cast

import numpy as np
import pandas as pd
import typer

from .core.config import RunConfig
from .core.hermmap import (
    is_completely_positive,
    is_trace_preserving,
    signed_kraus,
)
from .core.matlin import eig_hermitian, identity
from .core.reduced import build_basis, reduce, transfer_matrix
from .core.utils import (
    encode_complex,
    format_json,
    format_table,
    load_env_means,
    load_hamiltonian,
    load_map,
    write_json,
    write_table,
)
from .systems.domains import (
    SECTIONS,
    SectionName,
    compatibility_sections,
    intersection_equals_compatibility,
    membership_grid,
    north_pole_excluded,
    positivity_surface,
)
from .systems.twoqubit import CorrelationParams, analytic_eigensystem, classify, reduced_map
from .validation.pechukas import DEFAULT_SAMPLES, load_assignment, verify_theorem
from .validation.twoqubit import validate_two_qubit_family

logger = logging.getLogger(__name__)

T = TypeVar("T")

app = typer.Typer(
    name="ncp-maps",
    help="Construct, decompose and characterize not-completely-positive reduced maps.",
    add_completion=False,
)

# --- Shared options ---
A1_OPTION = typer.Option(0.0, "--a1", help="Correlation a1 = -<Sigma2 Xi1>.")
A2_OPTION = typer.Option(0.0, "--a2", help="Correlation a2 = <Sigma1 Xi1>.")
OUT_OPTION = typer.Option(None, "--out", "-o", help="Output file (default: stdout).")
FORMAT_OPTION = typer.Option("csv", "--format", "-f", help="Table format: csv or json.")
SEED_OPTION = typer.Option(0, "--seed", help="Seed for randomized checks.")
PROGRESS_OPTION = typer.Option(False, "--progress", help="Show a progress bar.")


@app.callback()
def main(
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Log progress at INFO level."),
) -> None:
    """Construct, decompose and characterize not-completely-positive reduced maps."""
    if verbose:
        logging.basicConfig(
            level=logging.INFO,
            format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        )


def _run(step: Callable[[], T]) -> T:
    """Map ValueError to exit code 1 and I/O failures to exit code 2."""
    try:
        return step()
    except ValueError as e:
        typer.echo(f"Error: {e}", err=True)
        raise typer.Exit(code=1) from e
    except OSError as e:
        typer.echo(f"I/O error: {e}", err=True)
        raise typer.Exit(code=2) from e


def _config(**kwargs: Any) -> RunConfig:
    return _run(lambda: RunConfig(**kwargs))


def _emit_table(df: pd.DataFrame, config: RunConfig) -> None:
    if config.output_path is None:
        typer.echo(format_table(df, config.fmt), nl=False)
        return
    path = config.output_path
    _run(lambda: write_table(df, path, config.fmt))
    typer.echo(f"Wrote {len(df)} rows to {path}", err=True)


def _emit_report(payload: dict[str, Any], config: RunConfig) -> None:
    if config.output_path is None:
        typer.echo(format_json(payload), nl=False)
        return
    path = config.output_path
    _run(lambda: write_json(payload, path))
    typer.echo(f"Wrote report to {path}", err=True)


# --- Two-qubit family ---
@app.command("eigencurve")
def eigencurve(
    a1: float = A1_OPTION,
    a2: float = A2_OPTION,
    steps: int = typer.Option(512, "--steps", min=2, help="Number of wt samples on [0, 2 pi]."),
    out: Path | None = OUT_OPTION,
    fmt: str = FORMAT_OPTION,
) -> None:
    """
    Eigenvalues of B along wt in [0, 2 pi], closed form and Jacobi.

    Columns: omega_t, lambda1..lambda4 (closed form, labelled), jacobi1..jacobi4
    (descending), max_deviation.
    """
    config = _config(command="eigencurve", a1=a1, a2=a2, output_path=out, fmt=fmt)
    base = CorrelationParams(config.a1, config.a2, 0.0)
    rows = []
    for wt in np.linspace(0.0, 2.0 * math.pi, steps):
        p = base.at(float(wt))
        analytic = analytic_eigensystem(p).eigenvalues
        numeric = eig_hermitian(reduced_map(p).b_matrix).eigenvalues
        row: dict[str, float] = {"omega_t": float(wt)}
        row.update({f"lambda{n + 1}": float(v) for n, v in enumerate(analytic)})
        row.update({f"jacobi{n + 1}": float(v) for n, v in enumerate(numeric)})
        row["max_deviation"] = float(np.max(np.abs(np.sort(analytic)[::-1] - numeric)))
        rows.append(row)
    _emit_table(pd.DataFrame(rows), config)


@app.command("domain")
def domain(
    c: float = typer.Option(..., "--c", help="Correlation magnitude <Sigma+ Xi1> in [0, 1)."),
    section: str = typer.Option(
        "plusminus",
        "--section",
        "-s",
        help=f"One of: {', '.join(SECTIONS)}.",
    ),
    grid_step: float = typer.Option(0.05, "--grid-step", help="Grid or angular step."),
    out: Path | None = OUT_OPTION,
    fmt: str = FORMAT_OPTION,
) -> None:
    """
    Sections of the compatibility domain, or its full membership grid.

    Curves have columns section, u, v; the grid3d table has s_plus, s_minus, s3,
    in_domain.
    """
    config = _config(command="domain", c=c, grid_step=grid_step, output_path=out, fmt=fmt)
    if section not in SECTIONS:
        typer.echo(f"Error: unknown section {section!r}; expected one of {SECTIONS}", err=True)
        raise typer.Exit(code=1)
    if section == "grid3d":
        df = _run(lambda: membership_grid(config.c, config.grid_step))
    else:
        n_points = int(round(2.0 * math.pi / config.grid_step)) + 1
        name = cast(SectionName, section)
        df = _run(lambda: compatibility_sections(config.c, name, n_points))
    _emit_table(df, config)


@app.command("positivity")
def positivity(
    a1: float = A1_OPTION,
    a2: float = A2_OPTION,
    omega_t: float = typer.Option(0.0, "--omega-t", help="Phase wt in radians."),
    grid_step: float = typer.Option(0.05, "--grid-step", help="Angular step in radians."),
    out: Path | None = OUT_OPTION,
    fmt: str = FORMAT_OPTION,
) -> None:
    """
    Boundary surface of the positivity domain at one phase.

    Columns: theta, phi, s1, s2, s3, in_unit_ball, north_pole_excluded.
    """
    config = _config(
        command="positivity",
        a1=a1,
        a2=a2,
        omega_t=omega_t,
        grid_step=grid_step,
        output_path=out,
        fmt=fmt,
    )
    p = CorrelationParams(config.a1, config.a2, config.omega_t)
    n_theta = int(round(math.pi / config.grid_step)) + 1
    n_phi = int(round(2.0 * math.pi / config.grid_step))
    df = positivity_surface(p, n_theta, n_phi)
    df["north_pole_excluded"] = north_pole_excluded(p)
    _emit_table(df, config)


# --- Maps from files ---
@app.command("decompose")
def decompose(
    map_file: Path = typer.Argument(..., help='Map JSON: {"dim": N, "b_matrix": [...]}.'),
    out: Path | None = OUT_OPTION,
) -> None:
    """
    Signed operator-sum decomposition of a Hermiticity-preserving map.

    Reports the B eigenvalues, the signs, the C matrices ([re, im] pairs,
    row-major) and the deviation of sum sign C^dagger C from the identity.
    """
    config = _config(command="decompose", output_path=out, fmt="json")
    m = _run(lambda: load_map(map_file))
    sk = _run(lambda: signed_kraus(m))
    completeness = float(np.max(np.abs(sk.completeness() - identity(m.dim))))
    payload = {
        "dim": m.dim,
        "eigenvalues": [float(v) for v in eig_hermitian(m.b_matrix).eigenvalues],
        "signs": sk.signs,
        "kraus": [
            {"sign": t.sign, "eigenvalue": t.eigenvalue, "matrix": encode_complex(t.matrix)}
            for t in sk.terms
        ],
        "completeness_deviation": completeness,
        "trace_preserving": is_trace_preserving(m),
        "completely_positive": is_completely_positive(m),
    }
    _emit_report(payload, config)


@app.command("reduce")
def reduce_cmd(
    hamiltonian_file: Path = typer.Argument(
        ..., help='Hamiltonian JSON: {"dimA": N, "dimB": M, "matrix": [...]}.'
    ),
    t: float = typer.Option(..., "--t", help="Evolution time."),
    env_means_file: Path = typer.Option(
        ..., "--env-means", help='Mean values JSON: {"env_means": [[...], ...]}.'
    ),
    out: Path | None = OUT_OPTION,
) -> None:
    """
    Reduced affine map of the subsystem from a bipartite Hamiltonian.

    Reports the drift d, the linear block, and the transfer-matrix checks.
    """
    config = _config(command="reduce", output_path=out, fmt="json")
    h, (n, m) = _run(lambda: load_hamiltonian(hamiltonian_file))
    means = _run(lambda: load_env_means(env_means_file))
    basis_a, basis_b = build_basis(n), build_basis(m)
    tm = _run(lambda: transfer_matrix(h, t, basis_a, basis_b, max_env_dim=config.max_env_dim))
    ram = _run(lambda: reduce(tm, means))
    payload = {
        "dimA": n,
        "dimB": m,
        "time": t,
        "drift": ram.drift,
        "block": ram.block,
        "transfer_orthogonal": tm.is_orthogonal(),
        "unit_row_column": tm.has_unit_row_column(),
    }
    _emit_report(payload, config)


@app.command("pechukas")
def pechukas(
    assignment_file: Path = typer.Argument(
        ..., help='Assignment JSON: {"dimA": N, "dimB": M, "b_matrix": [...]}.'
    ),
    samples: int = typer.Option(
        DEFAULT_SAMPLES, "--samples", "-n", min=1, help="Random pure states to scan."
    ),
    seed: int = SEED_OPTION,
    progress: bool = PROGRESS_OPTION,
    out: Path | None = OUT_OPTION,
) -> None:
    """
    Check a linear assignment rho_A -> rho_AB for the forced product structure.

    Exits 1 if the partial trace or linearity checks fail, or if the
    assignment is neither a fixed product nor shown to break positivity.
    """
    config = _config(command="pechukas", seed=seed, output_path=out, fmt="json")
    assignment = _run(lambda: load_assignment(assignment_file))
    run = _run(
        lambda: verify_theorem(assignment, samples=samples, seed=config.seed, progress=progress)
    )
    _emit_report(run.as_dict(), config)
    if not run.result.all_passed:
        raise typer.Exit(code=1)


# --- Verification runs ---
@app.command("scan")
def scan(
    c: float = typer.Option(..., "--c", help="Correlation magnitude in [0, 1)."),
    grid_step: float = typer.Option(0.02, "--grid-step", help="Spatial step per axis."),
    t_samples: int = typer.Option(720, "--t-samples", help="Phases sampled over [0, 2 pi)."),
    progress: bool = PROGRESS_OPTION,
    out: Path | None = OUT_OPTION,
) -> None:
    """
    Grid check that compatibility equals positivity at every sampled phase.

    Exits 1 on interior violations or on exterior points beyond one grid step.
    """
    config = _config(
        command="scan", c=c, grid_step=grid_step, t_samples=t_samples, output_path=out, fmt="json"
    )
    report = intersection_equals_compatibility(
        config.c, grid_step=config.grid_step, t_samples=config.t_samples, progress=progress
    )
    _emit_report(report.as_dict(), config)
    if not report.passed:
        raise typer.Exit(code=1)


@app.command("validate")
def validate(
    seed: int = SEED_OPTION,
    n_params: int = typer.Option(
        100, "--n-params", min=1, help="Random (a, wt) for the signed-Kraus checks."
    ),
    out: Path | None = typer.Option(None, "--out", "-o", help="Also write the report as JSON."),
) -> None:
    """
    Reproduce the closed forms of the two-qubit family.

    Checks:
    - Closed-form eigenvalues against Jacobi along wt
    - Signed Kraus reconstruction, completeness and orthogonality
    - Witness values for P' and the singlet W
    - Small-wt series
    - Completely positive special cases

    Example:
        ncp-maps validate --seed 0
    """
    config = _config(command="validate", seed=seed, output_path=out, fmt="json")
    result = validate_two_qubit_family(seed=config.seed, n_params=n_params)

    typer.echo(result.summary())
    if config.output_path is not None:
        path = config.output_path
        _run(lambda: write_json(result.as_dict(), path))

    if not result.all_passed:
        raise typer.Exit(code=1)


@app.command("info")
def info(
    a1: float = A1_OPTION,
    a2: float = A2_OPTION,
    omega_t: float = typer.Option(0.0, "--omega-t", help="Phase wt in radians."),
) -> None:
    """
    Show the two-qubit model and classify one member of the family.
    """
    p = _run(lambda: CorrelationParams(a1, a2, omega_t))
    es = analytic_eigensystem(p)
    typer.echo("Two-qubit reduced dynamics")
    typer.echo("=" * 40)
    typer.echo("Hamiltonian: H = (omega/2) Sigma3 Xi1")
    typer.echo("Correlations: a1 = -<Sigma2 Xi1>, a2 = <Sigma1 Xi1>")
    typer.echo("")
    typer.echo("Mean values:")
    typer.echo("  s1' = s1 cos(wt) + a1 sin(wt)")
    typer.echo("  s2' = s2 cos(wt) + a2 sin(wt)")
    typer.echo("  s3' = s3")
    typer.echo("")
    typer.echo(f"Parameters: a1={p.a1:g}, a2={p.a2:g}, wt={p.omega_t:g}")
    typer.echo(f"Class: {classify(p)}")
    typer.echo("Eigenvalues of B: " + ", ".join(f"{v:.6g}" for v in es.eigenvalues))


if __name__ == "__main__":
    app()
