"""
File I/O for maps, Hamiltonians, mean values and result tables.

Matrices are stored as a row-major flat list of ``[re, im]`` pairs. Floats are
written with their shortest round-trip representation so files are stable
across runs and platforms.
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Any

import numpy as np
import numpy.typing as npt
import pandas as pd

from .hermmap import MatrixMap
from .matlin import ComplexMatrix, as_hermitian, as_matrix


def encode_complex(m: npt.ArrayLike) -> list[list[float]]:
    """Flatten a matrix row-major into ``[re, im]`` pairs."""
    flat = as_matrix(m).ravel()
    return [[float(z.real), float(z.imag)] for z in flat]


def decode_complex(pairs: Any, shape: tuple[int, int]) -> ComplexMatrix:
    """
    Inverse of ``encode_complex``.

    Raises:
        ValueError: If the pair count or layout does not match ``shape``.
    """
    arr = np.asarray(pairs, dtype=np.float64)
    expected = shape[0] * shape[1]
    if arr.shape != (expected, 2):
        raise ValueError(f"Expected {expected} [re, im] pairs, got array of shape {arr.shape}")
    return (arr[:, 0] + 1j * arr[:, 1]).reshape(shape)


def read_json(path: Path) -> dict[str, Any]:
    """
    Load a JSON object from ``path``.

    Raises:
        FileNotFoundError: If the file is missing.
        ValueError: If the document is not a JSON object.
    """
    if not path.is_file():
        raise FileNotFoundError(f"File not found: {path}")
    with path.open("r", encoding="utf-8") as f:
        payload = json.load(f)
    if not isinstance(payload, dict):
        raise ValueError(f"{path} must contain a JSON object")
    return payload


def require_int(payload: dict[str, Any], key: str, path: Path) -> int:
    value = payload.get(key)
    if not isinstance(value, int) or isinstance(value, bool) or value < 1:
        raise ValueError(f"{path}: '{key}' must be a positive integer, got {value!r}")
    return value


def to_jsonable(obj: Any) -> Any:
    """Convert numpy scalars/arrays and paths into plain JSON values."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        value = float(obj)
        return value if math.isfinite(value) else None
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, Path):
        return str(obj)
    return obj


def format_json(payload: Any) -> str:
    """Render a report as JSON with sorted keys and a trailing newline."""
    return json.dumps(to_jsonable(payload), indent=2, sort_keys=True) + "\n"


def write_json(payload: dict[str, Any], path: Path) -> Path:
    """Write a JSON document (sorted keys, trailing newline)."""
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(format_json(payload), encoding="utf-8")
    return path


def save_map(m: MatrixMap, path: Path) -> Path:
    """Write ``{"dim": N, "b_matrix": [[re, im], ...]}``."""
    return write_json({"dim": m.dim, "b_matrix": encode_complex(m.b_matrix)}, path)


def load_map(path: Path) -> MatrixMap:
    """
    Read a map file.

    Raises:
        FileNotFoundError: If the file is missing.
        ValueError: If the document is malformed.
    """
    payload = read_json(path)
    dim = require_int(payload, "dim", path)
    b = decode_complex(payload.get("b_matrix"), (dim * dim, dim * dim))
    return MatrixMap(dim, b)


def save_hamiltonian(h: npt.ArrayLike, dims: tuple[int, int], path: Path) -> Path:
    """Write ``{"dimA": N, "dimB": M, "matrix": [[re, im], ...]}``."""
    return write_json({"dimA": dims[0], "dimB": dims[1], "matrix": encode_complex(h)}, path)


def load_hamiltonian(path: Path) -> tuple[ComplexMatrix, tuple[int, int]]:
    """
    Read a Hamiltonian file and validate Hermiticity.

    Returns:
        (matrix, (N, M))

    Raises:
        FileNotFoundError: If the file is missing.
        ValueError: If the document is malformed or the matrix is not Hermitian.
    """
    payload = read_json(path)
    n = require_int(payload, "dimA", path)
    m = require_int(payload, "dimB", path)
    h = decode_complex(payload.get("matrix"), (n * m, n * m))
    return as_hermitian(h), (n, m)


def save_env_means(means: npt.ArrayLike, path: Path) -> Path:
    """Write ``{"env_means": [[...], ...]}``."""
    return write_json({"env_means": np.asarray(means, dtype=np.float64)}, path)


def load_env_means(path: Path) -> npt.NDArray[np.float64]:
    """Read an environment mean-value table (rows alpha, columns beta >= 1)."""
    payload = read_json(path)
    if "env_means" not in payload:
        raise ValueError(f"{path}: missing 'env_means'")
    arr = np.asarray(payload["env_means"], dtype=np.float64)
    if arr.ndim != 2:
        raise ValueError(f"{path}: 'env_means' must be a 2-D table, got shape {arr.shape}")
    return arr


def _shortest(x: float) -> str:
    return repr(float(x))


def format_table(df: pd.DataFrame, fmt: str = "csv") -> str:
    """
    Render a result table as CSV (header row, no index) or JSON records.

    Raises:
        ValueError: If ``fmt`` is not "csv" or "json".
    """
    if fmt == "csv":
        return str(df.to_csv(index=False, float_format=_shortest, lineterminator="\n"))
    if fmt == "json":
        records = to_jsonable(df.to_dict(orient="records"))
        return json.dumps(records, indent=2) + "\n"
    raise ValueError(f"Unknown table format {fmt!r}")


def write_table(df: pd.DataFrame, path: Path, fmt: str = "csv") -> Path:
    """Write ``format_table(df, fmt)`` to ``path``."""
    text = format_table(df, fmt)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    return path
