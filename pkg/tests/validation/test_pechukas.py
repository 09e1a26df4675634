"""Tests for the assignment-map verification harness."""

from pathlib import Path

import numpy as np
import pytest
from numpy.testing import assert_allclose

from ncp_maps.core.matlin import identity, pauli, random_density_matrix, tensor
from ncp_maps.validation.pechukas import (
    AssignmentMap,
    check_constant_rho_B,
    check_pure_state_factorization,
    hunt_positivity_failure,
    is_product_assignment,
    load_assignment,
    perturbed_assignment,
    product_assignment,
    save_assignment,
    six_vectors,
    verify_theorem,
)

E0 = np.array([1.0, 0.0], dtype=np.complex128)
E1 = np.array([0.0, 1.0], dtype=np.complex128)


@pytest.fixture
def rho_b() -> np.ndarray:
    return random_density_matrix(2, np.random.default_rng(3))


@pytest.fixture
def product(rho_b: np.ndarray) -> AssignmentMap:
    return product_assignment(rho_b, 2)


class TestAssignmentMap:
    """Tests for tabulating and applying assignments."""

    def test_product_action(self, product: AssignmentMap, rho_b: np.ndarray) -> None:
        x = random_density_matrix(2, np.random.default_rng(4))
        assert_allclose(product(x), tensor(x, rho_b), atol=1e-14)

    def test_partial_trace_residual(self, product: AssignmentMap) -> None:
        assert product.partial_trace_residual() < 1e-12

    def test_shape_of_matrix(self) -> None:
        a = product_assignment(0.5 * identity(3), 2)
        assert a.dims == (2, 3)
        assert a.matrix.shape == (36, 4)

    def test_b_matrix_round_trip(self, product: AssignmentMap) -> None:
        """Test that the generalized B reproduces the same assignment."""
        b = product.b_matrix()
        assert b.shape == (8, 8)
        again = AssignmentMap.from_b_matrix(2, 2, b)
        assert_allclose(again.matrix, product.matrix, atol=1e-13)

    def test_rejects_wrong_image_shape(self) -> None:
        with pytest.raises(ValueError, match="Action returned shape"):
            AssignmentMap.from_action(2, 2, lambda x: x)

    def test_rejects_non_hermitian_image(self) -> None:
        with pytest.raises(ValueError, match="not Hermitian"):
            AssignmentMap.from_action(2, 2, lambda x: 1j * tensor(x, identity(2)))

    def test_apply_rejects_dimension(self, product: AssignmentMap) -> None:
        with pytest.raises(ValueError, match="does not match dimA"):
            product.apply(identity(3))

    def test_save_and_load(self, product: AssignmentMap, tmp_path: Path) -> None:
        path = save_assignment(product, tmp_path / "assign.json")
        loaded = load_assignment(path)
        assert loaded.dims == (2, 2)
        assert_allclose(loaded.matrix, product.matrix, atol=1e-13)

    def test_load_missing_file(self, tmp_path: Path) -> None:
        with pytest.raises(FileNotFoundError):
            load_assignment(tmp_path / "missing.json")


class TestPerturbedAssignment:
    """Tests for the non-product family X -> X x rho_B + eps (...)."""

    def test_partial_trace_is_exact(self) -> None:
        a = perturbed_assignment(0.5 * identity(2), 0.1)
        assert a.partial_trace_residual() < 1e-12

    def test_zero_eps_is_product(self) -> None:
        a = perturbed_assignment(0.5 * identity(2), 0.0)
        assert_allclose(a.matrix, product_assignment(0.5 * identity(2), 2).matrix, atol=1e-14)

    @pytest.mark.parametrize("eps", [0.2, 0.1, 0.05])
    def test_least_eigenvalue_is_minus_half_eps(self, eps: float) -> None:
        """Test that the search finds -eps/2 at an eigenvector of F_10."""
        a = perturbed_assignment(0.5 * identity(2), eps)
        hunt = hunt_positivity_failure(a, samples=50, seed=0)
        assert hunt.violation_found
        assert hunt.min_eigenvalue == pytest.approx(-0.5 * eps, abs=1e-10)

    def test_is_not_product(self) -> None:
        assert not is_product_assignment(perturbed_assignment(0.5 * identity(2), 0.1))

    def test_rejects_trivial_environment(self) -> None:
        with pytest.raises(ValueError, match="dimB >= 2"):
            perturbed_assignment(np.array([[1.0]]), 0.1)


class TestFactorization:
    """Tests for the pure-state factorization step."""

    def test_product_factorizes(self, product: AssignmentMap, rho_b: np.ndarray) -> None:
        psi = np.array([0.6, 0.8j])
        check = check_pure_state_factorization(product, psi)
        assert_allclose(check.rho_b, rho_b, atol=1e-14)
        assert check.residual < 1e-14
        assert check.hypothesis_holds

    def test_perturbed_reports_failure(self) -> None:
        a = perturbed_assignment(0.5 * identity(2), 0.1)
        psi = (E0 + E1) / np.sqrt(2.0)
        check = check_pure_state_factorization(a, psi)
        assert check.min_eigenvalue == pytest.approx(-0.05)
        assert not check.hypothesis_holds
        assert check.residual > 1e-3

    def test_rejects_unnormalized(self, product: AssignmentMap) -> None:
        with pytest.raises(ValueError, match="not normalized"):
            check_pure_state_factorization(product, [1.0, 1.0])

    def test_rejects_wrong_length(self, product: AssignmentMap) -> None:
        with pytest.raises(ValueError, match="expected 2"):
            check_pure_state_factorization(product, [1.0, 0.0, 0.0])


class TestConstancy:
    """Tests for the six-vector construction."""

    def test_overlaps(self) -> None:
        alpha = 0.4
        vectors = six_vectors(E0, E1, alpha, 1.3)
        gram = np.abs(np.array([[np.vdot(u, v) for v in vectors] for u in vectors])) ** 2
        assert_allclose(np.diag(gram), 1.0, atol=1e-15)
        assert gram[0, 2] == pytest.approx(0.5)
        assert gram[2, 3] == pytest.approx(0.0, abs=1e-15)
        assert gram[4, 5] == pytest.approx(0.0, abs=1e-15)
        assert gram[0, 4] == pytest.approx(np.cos(alpha) ** 2)

    def test_product_has_constant_factor(self, product: AssignmentMap) -> None:
        report = check_constant_rho_B(product, E0, E1, 0.4, 1.3)
        assert report.hypotheses_hold
        assert report.spread < 1e-13
        assert report.mixture_residual < 1e-13
        assert report.partial_mean_residual < 1e-13
        assert report.overlaps.shape == (6, 6)

    def test_perturbed_factor_varies(self) -> None:
        a = perturbed_assignment(0.5 * identity(2), 0.1)
        report = check_constant_rho_B(a, E0, E1, 0.4, 1.5 * np.pi)
        assert not report.hypotheses_hold
        assert report.spread > 1e-3
        assert 1 <= report.worst_pair[0] < report.worst_pair[1] <= 6

    def test_rejects_non_orthogonal(self, product: AssignmentMap) -> None:
        with pytest.raises(ValueError, match="not orthogonal"):
            check_constant_rho_B(product, E0, (E0 + E1) / np.sqrt(2.0), 0.1, 0.2)


class TestVerifyTheorem:
    """Tests for the full verification chain."""

    def test_product_passes(self, product: AssignmentMap) -> None:
        run = verify_theorem(product, samples=100, seed=0)
        assert run.result.all_passed, run.result.summary()
        assert run.product
        assert not run.hunt.violation_found
        assert run.constancy.spread < 1e-9

    def test_product_with_larger_environment(self) -> None:
        rb = random_density_matrix(3, np.random.default_rng(8))
        run = verify_theorem(product_assignment(rb, 2), samples=50, seed=1)
        assert run.result.all_passed, run.result.summary()

    def test_perturbed_locates_failure(self) -> None:
        run = verify_theorem(perturbed_assignment(0.5 * identity(2), 0.1), samples=100)
        assert run.result.all_passed, run.result.summary()
        assert not run.product
        assert run.hunt.min_eigenvalue < -1e-4

    def test_as_dict(self, product: AssignmentMap) -> None:
        payload = verify_theorem(product, samples=20).as_dict()
        assert payload["all_passed"] is True
        assert payload["states_scanned"] > 20
        assert len(payload["worst_pair"]) == 2
        assert {c["name"] for c in payload["checks"]} == {
            "partial_trace_consistency",
            "linearity",
            "theorem_chain",
        }

    def test_rejects_zero_samples(self, product: AssignmentMap) -> None:
        with pytest.raises(ValueError, match="samples must be positive"):
            verify_theorem(product, samples=0)

    def test_deterministic(self) -> None:
        a = perturbed_assignment(0.5 * identity(2), 0.1)
        first = verify_theorem(a, samples=30, seed=5)
        second = verify_theorem(a, samples=30, seed=5)
        assert first.hunt.min_eigenvalue == second.hunt.min_eigenvalue
        assert_allclose(first.hunt.state, second.hunt.state, atol=0)


def test_pauli_basis_is_default() -> None:
    """Test that the first non-identity element of the default qubit basis is Sigma_1."""
    a = perturbed_assignment(0.5 * identity(2), 1.0)
    assert_allclose(a.basis_a[1], pauli(1), atol=1e-15)
