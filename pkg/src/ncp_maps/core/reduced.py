"""
Reduced dynamics of a subsystem from bipartite Heisenberg evolution.

Each factor gets an orthonormal Hermitian basis F_{mu 0} (N^2 elements,
F_{00} = 1, Tr[F F] = N delta) and the product basis F_{mu nu} = F_{mu 0} x F_{0 nu}
is flattened as ``mu * M^2 + nu``. Under H the product basis evolves as

    e^{iHt} F_{mu nu} e^{-iHt} = sum t_{mu nu; alpha beta} F_{alpha beta}

and the subsystem mean values follow the affine map
<F_{mu 0}>' = d_mu + sum_alpha t_{mu 0; alpha 0} <F_{alpha 0}>.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from .config import MAX_ENV_DIM, PSD_TOL, RECONSTRUCTION_TOL
from .hermmap import MatrixMap, map_from_action
from .matlin import (
    ComplexMatrix,
    RealVector,
    as_hermitian,
    as_matrix,
    identity,
    is_psd,
    matrix_exp_unitary,
    partial_trace,
    pauli,
    tensor,
)

logger = logging.getLogger(__name__)

# Gram-Schmidt residuals below this norm mean the seed was dependent.
_DEPENDENCE_TOL = 1e-10


def gell_mann_seeds(dim: int) -> list[ComplexMatrix]:
    """
    Unnormalized generalized Gell-Mann matrices.

    Order: symmetric off-diagonal, antisymmetric off-diagonal, diagonal.
    """
    seeds: list[ComplexMatrix] = []
    pairs = [(j, k) for j in range(dim) for k in range(j + 1, dim)]
    for j, k in pairs:
        m = np.zeros((dim, dim), dtype=np.complex128)
        m[j, k] = m[k, j] = 1.0
        seeds.append(m)
    for j, k in pairs:
        m = np.zeros((dim, dim), dtype=np.complex128)
        m[j, k] = -1j
        m[k, j] = 1j
        seeds.append(m)
    for level in range(1, dim):
        diag = np.zeros(dim)
        diag[:level] = 1.0
        diag[level] = -level
        seeds.append(np.diag(diag).astype(np.complex128))
    return seeds


@dataclass(frozen=True)
class OperatorBasis:
    """
    Orthonormal Hermitian basis of N x N matrices.

    Attributes:
        dim: N.
        elements: Array of shape (N^2, N, N); elements[0] is the identity and
            Tr[F_mu F_nu] = N delta_mu_nu.
    """

    dim: int
    elements: npt.NDArray[np.complex128]

    def __len__(self) -> int:
        return int(self.elements.shape[0])

    def __getitem__(self, mu: int) -> ComplexMatrix:
        return self.elements[mu]

    def gram(self) -> RealVector:
        """Matrix of Tr[F_mu F_nu]."""
        return np.einsum("mab,nba->mn", self.elements, self.elements).real

    def coordinates(self, x: npt.ArrayLike) -> npt.NDArray[np.complex128]:
        """Return Tr[F_mu X] for every mu (complex for non-Hermitian X)."""
        mat = as_matrix(x)
        return np.einsum("mab,ba->m", self.elements, mat)

    def assemble(self, coords: npt.ArrayLike) -> ComplexMatrix:
        """Inverse of ``coordinates``: X = (1/N) sum_mu x_mu F_mu."""
        c = np.asarray(coords, dtype=np.complex128)
        if c.shape != (len(self),):
            raise ValueError(f"Expected {len(self)} coordinates, got shape {c.shape}")
        return np.einsum("m,mab->ab", c, self.elements) / self.dim

    def mean_values(self, rho: npt.ArrayLike) -> RealVector:
        """Mean values <F_mu> for mu >= 1."""
        return self.coordinates(rho)[1:].real

    def density_matrix(self, means: npt.ArrayLike) -> ComplexMatrix:
        """Return rho = (1/N)(1 + sum_mu <F_mu> F_mu) from the N^2 - 1 mean values."""
        m = np.asarray(means, dtype=np.float64)
        return self.assemble(np.concatenate([[1.0], m]))


def _normalized_residual(
    seed: ComplexMatrix, accepted: Sequence[ComplexMatrix], dim: int
) -> ComplexMatrix | None:
    r = seed.copy()
    for f in accepted:
        r = r - (np.vdot(f, r).real / dim) * f
    norm = np.linalg.norm(r)
    if norm < _DEPENDENCE_TOL:
        return None
    return np.asarray(r * np.sqrt(dim) / norm, dtype=np.complex128)


def build_basis(
    dim: int, seed_matrices: Iterable[npt.ArrayLike] | None = None
) -> OperatorBasis:
    """
    Gram-Schmidt an orthonormal Hermitian basis starting from the identity.

    Caller seeds are orthogonalized first, in order; the basis is then completed
    from the generalized Gell-Mann seeds, skipping any that are already spanned.

    Args:
        dim: Matrix dimension N.
        seed_matrices: Optional Hermitian seeds.

    Returns:
        OperatorBasis with N^2 elements.

    Raises:
        ValueError: If a caller seed is not Hermitian or is linearly dependent
            on the identity and the earlier seeds.
    """
    if dim < 1:
        raise ValueError(f"Dimension must be positive, got {dim}")
    accepted: list[ComplexMatrix] = [identity(dim)]
    for i, seed in enumerate(seed_matrices or []):
        h = as_hermitian(seed)
        if h.shape != (dim, dim):
            raise ValueError(f"Seed {i} has shape {h.shape}, expected {(dim, dim)}")
        f = _normalized_residual(h, accepted, dim)
        if f is None:
            raise ValueError(f"Seed {i} is linearly dependent on the identity and earlier seeds")
        accepted.append(f)
    for seed in gell_mann_seeds(dim):
        if len(accepted) == dim * dim:
            break
        f = _normalized_residual(seed, accepted, dim)
        if f is not None:
            accepted.append(f)
    return OperatorBasis(dim=dim, elements=np.stack(accepted))


def pauli_basis() -> OperatorBasis:
    """The basis (1, sigma_1, sigma_2, sigma_3)."""
    return OperatorBasis(dim=2, elements=np.stack([identity(2)] + [pauli(k) for k in (1, 2, 3)]))


def product_elements(basis_a: OperatorBasis, basis_b: OperatorBasis) -> npt.NDArray[np.complex128]:
    """All F_{mu nu} = F_{mu 0} x F_{0 nu}, shape (N^2 M^2, NM, NM)."""
    n, m = basis_a.dim, basis_b.dim
    # Axis order (mu, nu, a, c, b, d) gives row index a*M + c and column b*M + d.
    prod = np.einsum("mab,ncd->mnacbd", basis_a.elements, basis_b.elements)
    return prod.reshape(n * n * m * m, n * m, n * m)


@dataclass(frozen=True)
class TransferMatrix:
    """
    Heisenberg evolution of the product basis.

    Attributes:
        basis_a: Basis of the subsystem (N).
        basis_b: Basis of the environment (M).
        time: Evolution time t.
        entries: Real array indexed by (mu*M^2 + nu, alpha*M^2 + beta).
    """

    basis_a: OperatorBasis
    basis_b: OperatorBasis
    time: float
    entries: RealVector

    @property
    def dims(self) -> tuple[int, int]:
        return self.basis_a.dim, self.basis_b.dim

    def index(self, mu: int, nu: int) -> int:
        return mu * self.basis_b.dim**2 + nu

    def entry(self, mu: int, nu: int, alpha: int, beta: int) -> float:
        return float(self.entries[self.index(mu, nu), self.index(alpha, beta)])

    def is_orthogonal(self, tol: float = RECONSTRUCTION_TOL) -> bool:
        """True if t^T t is the identity within ``tol``."""
        t = self.entries
        return bool(np.max(np.abs(t.T @ t - np.eye(t.shape[0]))) <= tol)

    def has_unit_row_column(self, tol: float = RECONSTRUCTION_TOL) -> bool:
        """True if the (00) row and column are the unit vector."""
        unit = np.zeros(self.entries.shape[0])
        unit[0] = 1.0
        return bool(
            np.max(np.abs(self.entries[0] - unit)) <= tol
            and np.max(np.abs(self.entries[:, 0] - unit)) <= tol
        )

    def factorization_residual(self, pairs: Iterable[tuple[int, int]]) -> float:
        """
        Largest deviation of F_{mu nu}(t) from F_{mu 0}(t) F_{0 nu}(t) over ``pairs``.
        """
        elements = product_elements(self.basis_a, self.basis_b)

        def evolved(row: int) -> ComplexMatrix:
            return np.einsum("k,kab->ab", self.entries[row], elements)

        worst = 0.0
        for mu, nu in pairs:
            lhs = evolved(self.index(mu, nu))
            rhs = evolved(self.index(mu, 0)) @ evolved(self.index(0, nu))
            worst = max(worst, float(np.max(np.abs(lhs - rhs))))
        return worst


def transfer_matrix(
    h: npt.ArrayLike,
    time: float,
    basis_a: OperatorBasis,
    basis_b: OperatorBasis,
    max_env_dim: int = MAX_ENV_DIM,
) -> TransferMatrix:
    """
    Compute t_{mu nu; alpha beta} = Tr[(e^{iHt} F_{mu nu} e^{-iHt}) F_{alpha beta}] / NM.

    Raises:
        ValueError: If H is not Hermitian, its dimension is not N*M, or the
            environment exceeds ``max_env_dim``.
    """
    n, m = basis_a.dim, basis_b.dim
    if m > max_env_dim:
        raise ValueError(f"Environment dimension {m} exceeds the limit {max_env_dim}")
    ham = as_hermitian(h)
    if ham.shape != (n * m, n * m):
        raise ValueError(f"Hamiltonian of shape {ham.shape} does not match dims ({n}, {m})")
    u = matrix_exp_unitary(ham, time)
    elements = product_elements(basis_a, basis_b)
    evolved = np.einsum("ab,kbc,dc->kad", u, elements, u.conj())
    entries = np.einsum("kab,lba->kl", evolved, elements).real / (n * m)
    logger.debug("Transfer matrix of size %d computed at t=%g", entries.shape[0], time)
    return TransferMatrix(basis_a=basis_a, basis_b=basis_b, time=time, entries=entries)


@dataclass(frozen=True)
class ReducedAffineMap:
    """
    Affine map of subsystem mean values.

    Attributes:
        drift: d_mu for mu = 1..N^2-1.
        block: t_{mu 0; alpha 0} for mu, alpha = 1..N^2-1.
    """

    drift: RealVector
    block: RealVector

    @property
    def size(self) -> int:
        return int(self.drift.size)

    def apply(self, means: npt.ArrayLike) -> RealVector:
        """Return d + t x for mean values x."""
        x = np.asarray(means, dtype=np.float64)
        if x.shape != (self.size,):
            raise ValueError(f"Expected {self.size} mean values, got shape {x.shape}")
        return self.drift + self.block @ x


def reduce(tm: TransferMatrix, env_means: npt.ArrayLike) -> ReducedAffineMap:
    """
    Extract the drift and linear block from a transfer matrix.

    Args:
        tm: The transfer matrix.
        env_means: Mean values <F_{alpha beta}>, shape (N^2, M^2 - 1), column
            beta-1 for beta = 1..M^2-1 (row alpha = 0 holds the environment means).

    Returns:
        The ReducedAffineMap; it does not depend on <F_{alpha 0}>.

    Raises:
        ValueError: If ``env_means`` has the wrong shape.
    """
    n, m = tm.dims
    means = np.asarray(env_means, dtype=np.float64)
    if means.shape != (n * n, m * m - 1):
        raise ValueError(
            f"env_means must have shape {(n * n, m * m - 1)}, got {means.shape}"
        )
    t4 = tm.entries.reshape(n * n, m * m, n * n, m * m)
    drift = np.einsum("uab,ab->u", t4[1:, 0, :, 1:], means)
    block = t4[1:, 0, 1:, 0]
    return ReducedAffineMap(drift=np.asarray(drift), block=np.array(block))


def subsystem_means(
    pi: npt.ArrayLike, basis_a: OperatorBasis, basis_b: OperatorBasis
) -> RealVector:
    """Mean values <F_{alpha 0}>, alpha >= 1, of a bipartite state."""
    rho = partial_trace(pi, "second", (basis_a.dim, basis_b.dim))
    return basis_a.mean_values(rho)


def env_means(
    pi: npt.ArrayLike, basis_a: OperatorBasis, basis_b: OperatorBasis
) -> RealVector:
    """Mean values <F_{alpha beta}> for beta >= 1, shape (N^2, M^2 - 1)."""
    n, m = basis_a.dim, basis_b.dim
    coords = np.einsum("kab,ba->k", product_elements(basis_a, basis_b), as_matrix(pi)).real
    return coords.reshape(n * n, m * m)[:, 1:]


@dataclass(frozen=True)
class CrosscheckResult:
    """Subsystem state after evolution computed two ways."""

    rho_heisenberg: ComplexMatrix
    rho_schrodinger: ComplexMatrix
    max_deviation: float


def _check_density(pi: ComplexMatrix) -> ComplexMatrix:
    h = as_hermitian(pi)
    trace = float(np.trace(h).real)
    if abs(trace - 1.0) > RECONSTRUCTION_TOL:
        raise ValueError(f"Density matrix must have trace 1, got {trace:.12g}")
    if not is_psd(h, PSD_TOL):
        raise ValueError("Density matrix is not positive semidefinite")
    return h


def schrodinger_crosscheck(
    h: npt.ArrayLike,
    time: float,
    pi0: npt.ArrayLike,
    basis_a: OperatorBasis,
    basis_b: OperatorBasis,
) -> CrosscheckResult:
    """
    Compare the reduced affine map against tracing out the evolved joint state.

    Route one extracts mean values from ``pi0``, applies the reduced map and
    assembles the subsystem density matrix. Route two evolves the joint state,
    e^{-iHt} pi0 e^{iHt}, and takes the partial trace.

    Raises:
        ValueError: If ``pi0`` is not a density matrix.
    """
    state = _check_density(as_matrix(pi0))
    tm = transfer_matrix(h, time, basis_a, basis_b)
    ram = reduce(tm, env_means(state, basis_a, basis_b))
    rho_h = basis_a.density_matrix(ram.apply(subsystem_means(state, basis_a, basis_b)))

    u = matrix_exp_unitary(as_hermitian(h), time)
    evolved = u.conj().T @ state @ u
    rho_s = partial_trace(evolved, "second", (basis_a.dim, basis_b.dim))
    deviation = float(np.max(np.abs(rho_h - rho_s)))
    return CrosscheckResult(rho_heisenberg=rho_h, rho_schrodinger=rho_s, max_deviation=deviation)


def reduced_matrix_map(ram: ReducedAffineMap, basis_a: OperatorBasis) -> MatrixMap:
    """
    Extend the affine map of mean values to a linear map of matrices.

    1' = 1 + sum_mu d_mu F_{mu 0} and F_{alpha 0}' = sum_mu t_{mu 0; alpha 0} F_{mu 0}.
    """
    if ram.size != len(basis_a) - 1:
        raise ValueError(f"Reduced map of size {ram.size} does not match basis dim {basis_a.dim}")
    images = np.zeros((len(basis_a), len(basis_a)), dtype=np.float64)
    images[0, 0] = 1.0
    images[1:, 0] = ram.drift
    images[1:, 1:] = ram.block

    def action(x: ComplexMatrix) -> ComplexMatrix:
        return basis_a.assemble(images @ basis_a.coordinates(x))

    return map_from_action(basis_a.dim, action)


def two_qubit_hamiltonian(omega: float = 1.0) -> ComplexMatrix:
    """H = (omega / 2) Sigma_3 Xi_1 with Xi the second qubit."""
    return 0.5 * omega * tensor(pauli(3), pauli(1))
