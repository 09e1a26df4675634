"""
Linear maps of N x N matrices stored as their B-matrix.

A map Q -> Q' is held as the N^2 x N^2 matrix B with

    Q'_rs = sum_{j,k} B_{rj;sk} Q_jk,

where the composite index (r, j) is flattened as ``r * N + j``. For two qubits
the rows and columns therefore run 11, 12, 21, 22. The map preserves
Hermiticity exactly when B is Hermitian, and then the spectral decomposition
of B gives the signed operator-sum form

    Q' = sum_n sign(lambda_n) C(n) Q C(n)^dagger,   C(n)_rj = sqrt|lambda_n| <rj|n>.
"""

from __future__ import annotations

import logging
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from .config import HERMITIAN_TOL, KRAUS_CUTOFF, PSD_TOL, RECONSTRUCTION_TOL
from .matlin import (
    ComplexMatrix,
    as_matrix,
    eig_hermitian,
    hs_inner,
    identity,
    is_hermitian,
    ket_projector,
    random_unitary,
)

logger = logging.getLogger(__name__)

MatrixAction = Callable[[ComplexMatrix], npt.ArrayLike]


@dataclass(frozen=True)
class MatrixMap:
    """
    Linear map on N x N matrices.

    Attributes:
        dim: The matrix dimension N.
        b_matrix: Complex N^2 x N^2 array indexed by (r*N + j, s*N + k).
    """

    dim: int
    b_matrix: ComplexMatrix

    def __post_init__(self) -> None:
        if self.dim < 1:
            raise ValueError(f"Map dimension must be positive, got {self.dim}")
        expected = (self.dim**2, self.dim**2)
        if self.b_matrix.shape != expected:
            raise ValueError(f"B-matrix must have shape {expected}, got {self.b_matrix.shape}")

    @property
    def tensor(self) -> npt.NDArray[np.complex128]:
        """B reshaped to axes (r, j, s, k)."""
        n = self.dim
        return self.b_matrix.reshape(n, n, n, n)

    def is_hermiticity_preserving(self, tol: float = HERMITIAN_TOL) -> bool:
        """True if B_{rj;sk}^* = B_{sk;rj} within ``tol``."""
        return is_hermitian(self.b_matrix, tol)

    def __call__(self, q: npt.ArrayLike) -> ComplexMatrix:
        return apply(self, q)


def identity_map(dim: int) -> MatrixMap:
    """The map Q -> Q."""
    vec = identity(dim).ravel()
    return MatrixMap(dim, np.outer(vec, vec.conj()))


def map_from_action(dim: int, action: MatrixAction) -> MatrixMap:
    """
    Build the B-matrix of a linear action from the images of the matrix units.

    The column block for E_jk holds E_jk', so B_{rj;sk} = (E_jk')_rs.

    Raises:
        ValueError: If the action does not return N x N matrices.
    """
    n = dim
    b4 = np.zeros((n, n, n, n), dtype=np.complex128)
    for j in range(n):
        for k in range(n):
            unit = np.zeros((n, n), dtype=np.complex128)
            unit[j, k] = 1.0
            image = as_matrix(action(unit))
            if image.shape != (n, n):
                raise ValueError(f"Action returned shape {image.shape}, expected {(n, n)}")
            b4[:, j, :, k] = image
    return MatrixMap(n, b4.reshape(n * n, n * n))


def apply(m: MatrixMap, q: npt.ArrayLike) -> ComplexMatrix:
    """Apply the map: Q'_rs = sum B_{rj;sk} Q_jk."""
    mat = as_matrix(q)
    if mat.shape != (m.dim, m.dim):
        raise ValueError(f"Matrix of shape {mat.shape} does not match map dimension {m.dim}")
    return np.einsum("rjsk,jk->rs", m.tensor, mat)


def compose(second: MatrixMap, first: MatrixMap) -> MatrixMap:
    """B-matrix of Q -> second(first(Q))."""
    if second.dim != first.dim:
        raise ValueError(f"Cannot compose maps of dimension {second.dim} and {first.dim}")
    n = first.dim
    b4 = np.einsum("rusv,ujvk->rjsk", second.tensor, first.tensor)
    return MatrixMap(n, b4.reshape(n * n, n * n))


def is_trace_preserving(m: MatrixMap, tol: float = RECONSTRUCTION_TOL) -> bool:
    """True iff sum_r B_{rj;rk} = delta_jk entrywise within ``tol``."""
    partial = np.einsum("rjrk->jk", m.tensor)
    return bool(np.max(np.abs(partial - identity(m.dim))) <= tol)


def is_completely_positive(m: MatrixMap, tol: float = PSD_TOL) -> bool:
    """True iff the least eigenvalue of B is at least ``-tol``."""
    return eig_hermitian(m.b_matrix).min_eigenvalue >= -tol


def extend_with_identity(m: MatrixMap, anc_dim: int) -> MatrixMap:
    """
    Product of ``m`` with the identity map on an ``anc_dim``-dimensional ancilla.

    The result acts on NM x NM matrices ordered like ``matlin.tensor`` with
    the mapped system as the outer factor.
    """
    if anc_dim < 1:
        raise ValueError(f"Ancilla dimension must be positive, got {anc_dim}")
    n, k = m.dim, anc_dim
    eye = np.eye(k)
    b8 = np.einsum("rjsk,ac,bd->rajcsbkd", m.tensor, eye, eye)
    size = (n * k) ** 2
    return MatrixMap(n * k, b8.reshape(size, size))


@dataclass(frozen=True)
class KrausTerm:
    """One signed term sign * C Q C^dagger, with the B eigenvalue it came from."""

    sign: int
    eigenvalue: float
    matrix: ComplexMatrix


@dataclass(frozen=True)
class SignedKraus:
    """
    Signed operator-sum decomposition of a Hermiticity-preserving map.

    Terms with a nonnegative eigenvalue come first, each sign block ordered by
    descending |lambda|.
    """

    dim: int
    terms: tuple[KrausTerm, ...]

    @property
    def signs(self) -> list[int]:
        return [t.sign for t in self.terms]

    @property
    def eigenvalues(self) -> list[float]:
        return [t.eigenvalue for t in self.terms]

    @property
    def matrices(self) -> list[ComplexMatrix]:
        return [t.matrix for t in self.terms]

    def apply(self, q: npt.ArrayLike) -> ComplexMatrix:
        """Return sum sign C Q C^dagger."""
        mat = as_matrix(q)
        out = np.zeros((self.dim, self.dim), dtype=np.complex128)
        for t in self.terms:
            out += t.sign * (t.matrix @ mat @ t.matrix.conj().T)
        return out

    def completeness(self) -> ComplexMatrix:
        """Return sum sign C^dagger C, the identity for trace-preserving maps."""
        out = np.zeros((self.dim, self.dim), dtype=np.complex128)
        for t in self.terms:
            out += t.sign * (t.matrix.conj().T @ t.matrix)
        return out

    def gram(self) -> ComplexMatrix:
        """Matrix of Tr[C(m)^dagger C(n)]."""
        mats = self.matrices
        return np.array([[hs_inner(a, b) for b in mats] for a in mats], dtype=np.complex128)

    def _part(self, sign: int) -> MatrixMap:
        n = self.dim
        b = np.zeros((n * n, n * n), dtype=np.complex128)
        for t in self.terms:
            if t.sign == sign:
                vec = t.matrix.ravel()
                b += np.outer(vec, vec.conj())
        return MatrixMap(n, b)

    def positive_part(self) -> MatrixMap:
        """The completely positive map made of the + terms."""
        return self._part(1)

    def negative_part(self) -> MatrixMap:
        """The completely positive map made of the - terms (subtracted)."""
        return self._part(-1)

    def to_matrix_map(self) -> MatrixMap:
        """Reassemble the B-matrix from the terms."""
        pos, neg = self.positive_part(), self.negative_part()
        return MatrixMap(self.dim, pos.b_matrix - neg.b_matrix)


def signed_kraus(m: MatrixMap, cutoff: float = KRAUS_CUTOFF) -> SignedKraus:
    """
    Decompose a Hermiticity-preserving map into signed Kraus terms.

    Args:
        m: The map; its B-matrix must be Hermitian.
        cutoff: Eigenvalues with |lambda| below this produce no term.

    Returns:
        The SignedKraus, positive terms first.

    Raises:
        ValueError: If B is not Hermitian.
    """
    es = eig_hermitian(m.b_matrix)
    n = m.dim
    positive: list[KrausTerm] = []
    negative: list[KrausTerm] = []
    for i, lam in enumerate(es.eigenvalues):
        if abs(lam) < cutoff:
            logger.debug("Dropping Kraus term for eigenvalue %.3e", lam)
            continue
        c = np.sqrt(abs(lam)) * es.vector(i).reshape(n, n)
        term = KrausTerm(sign=1 if lam >= 0 else -1, eigenvalue=float(lam), matrix=c)
        (positive if lam >= 0 else negative).append(term)
    # Eigenvalues arrive descending, so the negative block is reversed to descending |lambda|.
    return SignedKraus(dim=n, terms=tuple(positive + negative[::-1]))


@dataclass(frozen=True)
class EntanglementWitness:
    """
    Witness of non-complete-positivity.

    Attributes:
        state: Image of the maximally entangled state under map x identity.
        witness: Projector onto the eigenvector of the least eigenvalue of ``state``.
        value: Tr[state * witness]; negative iff the map is not completely positive.
    """

    state: ComplexMatrix
    witness: ComplexMatrix
    value: float


def maximally_entangled_state(dim: int) -> ComplexMatrix:
    """Return |Omega><Omega| with |Omega> = sum_j |jj> / sqrt(N)."""
    return ket_projector(identity(dim).ravel() / np.sqrt(dim))


def entanglement_witness(m: MatrixMap) -> EntanglementWitness:
    """Apply ``m`` x identity to the maximally entangled state and pick the worst direction."""
    extended = extend_with_identity(m, m.dim)
    state = apply(extended, maximally_entangled_state(m.dim))
    es = eig_hermitian(state)
    w = es.projector([es.dim - 1])
    return EntanglementWitness(state=state, witness=w, value=float(hs_inner(w, state).real))


def random_signed_map(dim: int, rng: np.random.Generator, n_terms: int = 4) -> MatrixMap:
    """
    Random trace-preserving, Hermiticity-preserving map.

    A signed sum of ``n_terms`` unitary conjugations with at least one negative
    term, weights rescaled so that sum sign * weight = 1.
    """
    if n_terms < 2:
        raise ValueError(f"Need at least two terms for a signed map, got {n_terms}")
    n_neg = int(rng.integers(1, n_terms))
    neg = rng.uniform(0.1, 0.5, n_neg)
    pos = rng.uniform(0.1, 1.0, n_terms - n_neg)
    pos *= (1.0 + neg.sum()) / pos.sum()
    weights = np.concatenate([pos, -neg])
    unitaries = [random_unitary(dim, rng) for _ in range(n_terms)]

    def action(q: ComplexMatrix) -> ComplexMatrix:
        out = np.zeros((dim, dim), dtype=np.complex128)
        for w, u in zip(weights, unitaries, strict=True):
            out += w * (u @ q @ u.conj().T)
        return out

    return map_from_action(dim, action)
