"""Tests for B-matrix maps and the signed operator-sum decomposition."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from ncp_maps.core.hermmap import (
    MatrixMap,
    apply,
    compose,
    entanglement_witness,
    extend_with_identity,
    identity_map,
    is_completely_positive,
    is_trace_preserving,
    map_from_action,
    maximally_entangled_state,
    random_signed_map,
    signed_kraus,
)
from ncp_maps.core.matlin import (
    ComplexMatrix,
    eig_hermitian,
    identity,
    pauli,
    random_hermitian,
    random_unitary,
)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(7)


def _transpose_map(dim: int) -> MatrixMap:
    return map_from_action(dim, lambda q: q.T)


class TestMatrixMap:
    """Tests for the B-matrix representation."""

    def test_shape_is_checked(self) -> None:
        with pytest.raises(ValueError, match="B-matrix must have shape"):
            MatrixMap(2, np.zeros((3, 3), dtype=np.complex128))

    def test_identity_map(self, rng: np.random.Generator) -> None:
        q = random_hermitian(3, rng)
        assert_allclose(identity_map(3)(q), q, atol=1e-15)

    def test_map_from_action_matches_action(self, rng: np.random.Generator) -> None:
        """Test that the tabulated map reproduces a unitary conjugation."""
        u = random_unitary(3, rng)

        def action(q: ComplexMatrix) -> ComplexMatrix:
            return u @ q @ u.conj().T

        m = map_from_action(3, action)
        q = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        assert_allclose(apply(m, q), action(q), atol=1e-13)

    def test_index_convention(self) -> None:
        """Test B_{rj;sk} = (E_jk')_rs on the transpose map."""
        b = _transpose_map(2).b_matrix
        # E_01 -> E_10, so B_{1 0; 0 1} = 1 with index r*N + j.
        assert b[1 * 2 + 0, 0 * 2 + 1] == pytest.approx(1.0)
        assert b[0 * 2 + 0, 0 * 2 + 0] == pytest.approx(1.0)

    def test_apply_rejects_wrong_shape(self) -> None:
        with pytest.raises(ValueError, match="does not match map dimension"):
            apply(identity_map(2), identity(3))

    def test_hermiticity_preserving(self, rng: np.random.Generator) -> None:
        assert random_signed_map(2, rng).is_hermiticity_preserving()

        def skew(q: ComplexMatrix) -> ComplexMatrix:
            return 1j * q

        assert not map_from_action(2, skew).is_hermiticity_preserving()


class TestComposition:
    """Tests for compose and extend_with_identity."""

    def test_compose(self, rng: np.random.Generator) -> None:
        first = random_signed_map(2, rng)
        second = random_signed_map(2, rng)
        q = random_hermitian(2, rng)
        assert_allclose(compose(second, first)(q), second(first(q)), atol=1e-13)

    def test_compose_dimension_mismatch(self) -> None:
        with pytest.raises(ValueError, match="Cannot compose"):
            compose(identity_map(2), identity_map(3))

    def test_extension_acts_on_first_factor(self, rng: np.random.Generator) -> None:
        """Test (map x id)(X x Y) = map(X) x Y."""
        m = random_signed_map(2, rng)
        x, y = random_hermitian(2, rng), random_hermitian(3, rng)
        extended = extend_with_identity(m, 3)
        assert_allclose(extended(np.kron(x, y)), np.kron(m(x), y), atol=1e-13)

    def test_extension_of_identity(self) -> None:
        assert_allclose(extend_with_identity(identity_map(2), 2).b_matrix, identity_map(4).b_matrix)


class TestPredicates:
    """Tests for trace preservation and complete positivity."""

    def test_unitary_conjugation_is_cp_and_tp(self, rng: np.random.Generator) -> None:
        u = random_unitary(2, rng)
        m = map_from_action(2, lambda q: u @ q @ u.conj().T)
        assert is_trace_preserving(m)
        assert is_completely_positive(m)

    def test_transpose_is_not_cp(self) -> None:
        m = _transpose_map(2)
        assert is_trace_preserving(m)
        assert not is_completely_positive(m)

    def test_random_signed_map_is_tp(self, rng: np.random.Generator) -> None:
        for _ in range(5):
            assert is_trace_preserving(random_signed_map(3, rng))

    def test_random_signed_map_needs_two_terms(self, rng: np.random.Generator) -> None:
        with pytest.raises(ValueError, match="at least two terms"):
            random_signed_map(2, rng, n_terms=1)


class TestSignedKraus:
    """Tests for the signed operator-sum decomposition."""

    def test_identity_map_has_one_term(self) -> None:
        sk = signed_kraus(identity_map(2))
        assert sk.signs == [1]
        assert sk.eigenvalues[0] == pytest.approx(2.0)
        assert_allclose(sk.matrices[0], identity(2), atol=1e-14)

    def test_transpose_signs(self) -> None:
        """Test that the transpose has three positive and one negative term."""
        sk = signed_kraus(_transpose_map(2))
        assert sk.signs == [1, 1, 1, -1]
        assert sk.eigenvalues[-1] == pytest.approx(-1.0)

    def test_reconstruction(self, rng: np.random.Generator) -> None:
        """Test sum sign C Q C^dagger = map(Q) and the reassembled B."""
        m = random_signed_map(3, rng)
        sk = signed_kraus(m)
        for _ in range(10):
            q = random_hermitian(3, rng)
            assert_allclose(sk.apply(q), m(q), atol=1e-10)
        assert_allclose(sk.to_matrix_map().b_matrix, m.b_matrix, atol=1e-10)

    def test_completeness_and_orthogonality(self, rng: np.random.Generator) -> None:
        m = random_signed_map(2, rng)
        sk = signed_kraus(m)
        assert_allclose(sk.completeness(), identity(2), atol=1e-10)
        gram = sk.gram()
        assert_allclose(gram - np.diag(np.diag(gram)), 0.0, atol=1e-10)
        assert_allclose(np.diag(gram).real, np.abs(sk.eigenvalues), atol=1e-10)

    def test_parts_are_cp(self, rng: np.random.Generator) -> None:
        """Test that the map is a difference of two CP maps."""
        sk = signed_kraus(random_signed_map(2, rng))
        assert is_completely_positive(sk.positive_part())
        assert is_completely_positive(sk.negative_part())

    def test_block_ordering(self) -> None:
        """Test positive terms first, each block by descending |lambda|."""
        sk = signed_kraus(map_from_action(2, lambda q: 2.0 * q.T - 0.5 * q))
        signs = sk.signs
        assert signs == sorted(signs, reverse=True)
        for sign in (1, -1):
            block = [abs(t.eigenvalue) for t in sk.terms if t.sign == sign]
            assert block == sorted(block, reverse=True)

    def test_rejects_non_hermitian_b(self) -> None:
        with pytest.raises(ValueError):
            signed_kraus(map_from_action(2, lambda q: 1j * q))


class TestEntanglementWitness:
    """Tests for the maximally-entangled-state witness."""

    def test_state_is_b_over_n(self) -> None:
        m = _transpose_map(2)
        w = entanglement_witness(m)
        assert_allclose(w.state, m.b_matrix / 2, atol=1e-15)

    def test_transpose_witness_is_negative(self) -> None:
        w = entanglement_witness(_transpose_map(2))
        assert w.value == pytest.approx(-0.5)

    def test_cp_map_witness_is_nonnegative(self) -> None:
        w = entanglement_witness(identity_map(3))
        assert w.value >= -1e-12

    def test_maximally_entangled_state(self) -> None:
        omega = maximally_entangled_state(2)
        assert np.trace(omega).real == pytest.approx(1.0)
        assert eig_hermitian(omega).eigenvalues[0] == pytest.approx(1.0)

    def test_witness_value_matches_b_spectrum(self) -> None:
        w = entanglement_witness(map_from_action(2, lambda q: q - 0.25 * pauli(1) @ q @ pauli(1)))
        b = map_from_action(2, lambda q: q - 0.25 * pauli(1) @ q @ pauli(1)).b_matrix
        assert w.value == pytest.approx(eig_hermitian(b).min_eigenvalue / 2)
