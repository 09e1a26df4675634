"""
Dense complex matrix kernel.

Tensor products, partial traces, a cyclic Jacobi eigensolver for Hermitian
matrices, positivity tests and the Pauli/Bloch helpers that every other module
builds on. Matrices are plain ``numpy`` arrays of dtype ``complex128``; the
first factor of a tensor product is the outer (slow) index.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass
from typing import Literal

import numpy as np
import numpy.typing as npt

from .config import HERMITIAN_TOL, JACOBI_MAX_SWEEPS, JACOBI_TOL, PSD_TOL

logger = logging.getLogger(__name__)

ComplexMatrix = npt.NDArray[np.complex128]
RealVector = npt.NDArray[np.float64]

Subsystem = Literal["first", "second"]

# Entries below this magnitude are treated as zero when fixing eigenvector phases.
_PHASE_CUTOFF = 1e-12
# Eigenvalues closer than this are ordered by their eigenvectors instead.
_TIE_TOL = 1e-12

_PAULI: dict[int, list[list[complex]]] = {
    1: [[0, 1], [1, 0]],
    2: [[0, -1j], [1j, 0]],
    3: [[1, 0], [0, -1]],
}


def as_matrix(m: npt.ArrayLike) -> ComplexMatrix:
    """Return ``m`` as a 2-D complex array, raising ValueError otherwise."""
    arr = np.asarray(m, dtype=np.complex128)
    if arr.ndim != 2:
        raise ValueError(f"Expected a 2-D matrix, got shape {arr.shape}")
    return arr


def identity(n: int) -> ComplexMatrix:
    """Return the n x n identity matrix."""
    if n < 1:
        raise ValueError(f"Dimension must be positive, got {n}")
    return np.eye(n, dtype=np.complex128)


def pauli(index: int) -> ComplexMatrix:
    """
    Return the Pauli matrix sigma_index.

    Args:
        index: 1, 2 or 3.

    Raises:
        ValueError: If index is not 1, 2 or 3.
    """
    if index not in _PAULI:
        raise ValueError(f"Pauli index must be 1, 2 or 3, got {index!r}")
    return np.array(_PAULI[index], dtype=np.complex128)


def tensor(a: npt.ArrayLike, b: npt.ArrayLike) -> ComplexMatrix:
    """Kronecker product with ``a`` as the outer factor."""
    return np.kron(as_matrix(a), as_matrix(b))


def _check_square(m: ComplexMatrix, name: str = "matrix") -> int:
    if m.shape[0] != m.shape[1]:
        raise ValueError(f"{name} must be square, got shape {m.shape}")
    return int(m.shape[0])


def _blocks(m: npt.ArrayLike, dims: tuple[int, int]) -> npt.NDArray[np.complex128]:
    n, k = dims
    arr = as_matrix(m)
    if n < 1 or k < 1 or arr.shape != (n * k, n * k):
        raise ValueError(f"Matrix of shape {arr.shape} does not factor as dims {dims}")
    return arr.reshape(n, k, n, k)


def partial_trace(
    m: npt.ArrayLike, subsystem: Subsystem, dims: tuple[int, int]
) -> ComplexMatrix:
    """
    Trace out one factor of a bipartite matrix.

    Args:
        m: Matrix of dimension N*M.
        subsystem: Which factor to trace out, "first" (N) or "second" (M).
        dims: The factor dimensions (N, M).

    Returns:
        The matrix of the retained factor.

    Raises:
        ValueError: On a dimension mismatch or an unknown subsystem.
    """
    blocks = _blocks(m, dims)
    if subsystem == "second":
        return np.einsum("ajbj->ab", blocks)
    if subsystem == "first":
        return np.einsum("jajb->ab", blocks)
    raise ValueError(f"subsystem must be 'first' or 'second', got {subsystem!r}")


def partial_contract(
    m: npt.ArrayLike, psi: npt.ArrayLike, dims: tuple[int, int]
) -> ComplexMatrix:
    """Return <psi|M|psi> taken over the first factor, an M x M matrix."""
    blocks = _blocks(m, dims)
    vec = np.asarray(psi, dtype=np.complex128).ravel()
    if vec.shape != (dims[0],):
        raise ValueError(f"State of length {vec.size} does not match first factor {dims[0]}")
    return np.einsum("a,aibj,b->ij", vec.conj(), blocks, vec)


def hs_inner(a: npt.ArrayLike, b: npt.ArrayLike) -> complex:
    """Hilbert-Schmidt inner product Tr[A^dagger B]."""
    ma, mb = as_matrix(a), as_matrix(b)
    if ma.shape != mb.shape:
        raise ValueError(f"Dimension mismatch: {ma.shape} vs {mb.shape}")
    return complex(np.vdot(ma, mb))


def is_hermitian(m: npt.ArrayLike, tol: float = HERMITIAN_TOL) -> bool:
    """True if ``m`` is square and equals its conjugate transpose entrywise to ``tol``."""
    arr = as_matrix(m)
    if arr.shape[0] != arr.shape[1]:
        return False
    return bool(np.max(np.abs(arr - arr.conj().T), initial=0.0) <= tol)


def as_hermitian(m: npt.ArrayLike, tol: float = HERMITIAN_TOL) -> ComplexMatrix:
    """
    Validate Hermiticity and return the exactly symmetrized matrix.

    Raises:
        ValueError: If ``m`` is not square or deviates from Hermitian by more than ``tol``.
    """
    arr = as_matrix(m)
    _check_square(arr)
    deviation = float(np.max(np.abs(arr - arr.conj().T), initial=0.0))
    if deviation > tol:
        raise ValueError(f"Matrix is not Hermitian (max deviation {deviation:.3e} > {tol:.1e})")
    return 0.5 * (arr + arr.conj().T)


@dataclass(frozen=True)
class EigenSystem:
    """
    Spectral decomposition of a Hermitian matrix.

    Attributes:
        eigenvalues: Real eigenvalues in descending order.
        eigenvectors: Orthonormal eigenvectors as the columns of a matrix.
    """

    eigenvalues: RealVector
    eigenvectors: ComplexMatrix

    @property
    def dim(self) -> int:
        return int(self.eigenvalues.size)

    @property
    def min_eigenvalue(self) -> float:
        return float(self.eigenvalues[-1])

    def vector(self, n: int) -> ComplexMatrix:
        """Eigenvector n as a 1-D array."""
        return self.eigenvectors[:, n]

    def projector(self, indices: Sequence[int]) -> ComplexMatrix:
        """Orthogonal projector onto the span of the selected eigenvectors."""
        v = self.eigenvectors[:, list(indices)]
        return v @ v.conj().T

    def reconstruct(self) -> ComplexMatrix:
        """Return sum_n lambda_n |n><n|."""
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def _rotate(a: ComplexMatrix, v: ComplexMatrix, p: int, q: int) -> None:
    """Zero a[p, q] with one complex Jacobi rotation, updating ``a`` and ``v`` in place."""
    apq = a[p, q]
    r = abs(apq)
    if r == 0.0:
        return
    phase = apq / r
    theta = (a[q, q].real - a[p, p].real) / (2.0 * r)
    t = 1.0 / (abs(theta) + np.sqrt(theta * theta + 1.0))
    if theta < 0.0:
        t = -t
    c = 1.0 / np.sqrt(t * t + 1.0)
    s = t * c
    # Phase on q makes the pivot real, then the real rotation of the symmetric case.
    rot = np.array([[c, s], [-s * np.conj(phase), c * np.conj(phase)]], dtype=np.complex128)
    idx = [p, q]
    a[:, idx] = a[:, idx] @ rot
    a[idx, :] = rot.conj().T @ a[idx, :]
    a[p, q] = a[q, p] = 0.0
    a[p, p] = a[p, p].real
    a[q, q] = a[q, q].real
    v[:, idx] = v[:, idx] @ rot


def _off_norm(a: ComplexMatrix) -> float:
    return float(np.linalg.norm(a - np.diag(np.diag(a))))


def _fix_phase(vec: ComplexMatrix) -> ComplexMatrix:
    nonzero = np.flatnonzero(np.abs(vec) > _PHASE_CUTOFF)
    if nonzero.size == 0:
        return vec
    first = vec[nonzero[0]]
    return vec * (abs(first) / first)


def _entry_key(vec: ComplexMatrix) -> tuple[float, ...]:
    parts: list[float] = []
    for x in vec:
        parts.append(round(float(x.real), 12))
        parts.append(round(float(x.imag), 12))
    return tuple(parts)


def _ordered(values: RealVector, vectors: ComplexMatrix) -> EigenSystem:
    fixed = np.column_stack([_fix_phase(vectors[:, i]) for i in range(values.size)])
    order = list(np.argsort(-values, kind="stable"))
    result: list[int] = []
    start = 0
    while start < len(order):
        stop = start + 1
        while stop < len(order) and values[order[start]] - values[order[stop]] < _TIE_TOL:
            stop += 1
        group = order[start:stop]
        group.sort(key=lambda i: _entry_key(fixed[:, i]), reverse=True)
        result.extend(group)
        start = stop
    return EigenSystem(
        eigenvalues=np.asarray(values[result], dtype=np.float64),
        eigenvectors=np.ascontiguousarray(fixed[:, result]),
    )


def eig_hermitian(
    h: npt.ArrayLike,
    tol: float = JACOBI_TOL,
    max_sweeps: int = JACOBI_MAX_SWEEPS,
) -> EigenSystem:
    """
    Diagonalize a Hermitian matrix with cyclic Jacobi rotations.

    Eigenvalues come back in descending order. Each eigenvector has its first
    nonzero entry real and positive; eigenvectors of (numerically) equal
    eigenvalues are ordered by descending lexicographic comparison of their
    entries.

    Args:
        h: Hermitian matrix (within HERMITIAN_TOL).
        tol: Sweeps stop when the off-diagonal Frobenius norm drops below this.
        max_sweeps: Upper bound on full sweeps; a warning is logged if reached.

    Returns:
        The EigenSystem.

    Raises:
        ValueError: If ``h`` is not Hermitian.
    """
    a = as_hermitian(h).copy()
    n = a.shape[0]
    v = identity(n)
    sweeps = 0
    off = _off_norm(a)
    while off >= tol and sweeps < max_sweeps:
        for p in range(n - 1):
            for q in range(p + 1, n):
                _rotate(a, v, p, q)
        sweeps += 1
        off = _off_norm(a)
    if off >= tol:
        logger.warning(
            "Jacobi solver stopped after %d sweeps with off-diagonal norm %.3e", sweeps, off
        )
    else:
        logger.debug("Jacobi solver converged in %d sweeps (dim %d)", sweeps, n)
    return _ordered(np.real(np.diag(a)).astype(np.float64), v)


def min_eigenvalue(h: npt.ArrayLike) -> float:
    """Least eigenvalue of a Hermitian matrix."""
    return eig_hermitian(h).min_eigenvalue


def is_psd(h: npt.ArrayLike, tol: float = PSD_TOL) -> bool:
    """True iff the least eigenvalue of ``h`` is at least ``-tol``."""
    return min_eigenvalue(h) >= -tol


def matrix_exp_unitary(h: npt.ArrayLike, t: float) -> ComplexMatrix:
    """Return exp(iHt) built from the spectral decomposition of ``h``."""
    es = eig_hermitian(h)
    v = es.eigenvectors
    return (v * np.exp(1j * es.eigenvalues * t)) @ v.conj().T


def ket_projector(psi: npt.ArrayLike) -> ComplexMatrix:
    """Return |psi><psi|."""
    vec = np.asarray(psi, dtype=np.complex128).ravel()
    return np.outer(vec, vec.conj())


def density_matrix_from_bloch(v: npt.ArrayLike) -> ComplexMatrix:
    """Return rho = (1 + v . sigma) / 2 for a three-component vector v."""
    s = np.asarray(v, dtype=np.float64).ravel()
    if s.shape != (3,):
        raise ValueError(f"Bloch vector must have three components, got {s.size}")
    rho = identity(2)
    for k in range(3):
        rho = rho + s[k] * pauli(k + 1)
    return 0.5 * rho


def bloch_from_density(rho: npt.ArrayLike) -> RealVector:
    """Return the mean values (Tr[sigma_k rho]) of a 2 x 2 matrix."""
    m = as_matrix(rho)
    if m.shape != (2, 2):
        raise ValueError(f"Expected a 2 x 2 matrix, got shape {m.shape}")
    return np.array([hs_inner(pauli(k), m).real for k in (1, 2, 3)], dtype=np.float64)


def random_unitary(dim: int, rng: np.random.Generator) -> ComplexMatrix:
    """Haar-random unitary from the QR decomposition of a complex Gaussian matrix."""
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return np.asarray(q * (d / np.abs(d)), dtype=np.complex128)


def random_hermitian(dim: int, rng: np.random.Generator) -> ComplexMatrix:
    """Entries uniform in [-1, 1] + i[-1, 1], then symmetrized."""
    z = rng.uniform(-1.0, 1.0, (dim, dim)) + 1j * rng.uniform(-1.0, 1.0, (dim, dim))
    return 0.5 * (z + z.conj().T)


def random_pure_state(dim: int, rng: np.random.Generator) -> ComplexMatrix:
    """Unit vector distributed uniformly on the complex sphere."""
    z = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return np.asarray(z / np.linalg.norm(z), dtype=np.complex128)


def random_density_matrix(dim: int, rng: np.random.Generator) -> ComplexMatrix:
    """Full-rank random density matrix G G^dagger / Tr[G G^dagger]."""
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    rho = g @ g.conj().T
    return np.asarray(rho / np.trace(rho).real, dtype=np.complex128)
