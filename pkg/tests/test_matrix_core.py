import numpy as np
import pytest

from nonmarkov.matrix_core import (
    anticommutator,
    as_matrix,
    commutator,
    hermitian_eig,
    hs_norm_sq,
    identity,
    kron,
    sigma_x,
    sigma_y,
    sigma_z,
    trace_of,
)

from conftest import random_hermitian


class TestHermitianEig:
    def test_identity(self):
        dec = hermitian_eig(identity(2))
        assert np.allclose(dec.eigenvalues, [1.0, 1.0])

    def test_sigma_z(self):
        dec = hermitian_eig(sigma_z)
        assert np.allclose(dec.eigenvalues, [-1.0, 1.0])

    def test_already_diagonal(self):
        dec = hermitian_eig(np.diag([1.4, -0.2, -0.2]).astype(complex))
        assert np.allclose(dec.eigenvalues, [-0.2, -0.2, 1.4])

    def test_rejects_non_hermitian(self):
        with pytest.raises(ValueError, match="Hermitian"):
            hermitian_eig(np.array([[0, 1], [0, 0]], dtype=complex))

    def test_random_reconstruction(self, rng):
        # 1000 matrices, mixed dimensions
        for _ in range(1000):
            dim = int(rng.integers(2, 7))
            H = random_hermitian(rng, dim)
            dec = hermitian_eig(H)
            assert np.max(np.abs(dec.reconstruct() - H)) < 1e-10
            gram = dec.eigenvectors.conj().T @ dec.eigenvectors
            assert np.max(np.abs(gram - np.eye(dim))) < 1e-10
            assert abs(dec.eigenvalues.sum() - np.trace(H).real) < 1e-10
            assert np.all(np.diff(dec.eigenvalues) >= 0)

    def test_deterministic(self, rng):
        H = random_hermitian(rng, 5)
        a = hermitian_eig(H)
        b = hermitian_eig(H.copy())
        assert np.array_equal(a.eigenvalues, b.eigenvalues)
        assert np.array_equal(a.eigenvectors, b.eigenvectors)

    def test_degenerate_cluster_spans_eigenspace(self):
        # eigenvectors within the -0.2 cluster may be any orthonormal basis;
        # the projector onto the cluster must be basis independent
        H = np.diag([1.4, -0.2, -0.2]).astype(complex)
        U = hermitian_eig(random_hermitian(np.random.default_rng(5), 3)).eigenvectors
        dec = hermitian_eig(U @ H @ U.conj().T)
        P = sum(dec.projector(i) for i in range(2))
        expected = U @ np.diag([0.0, 1.0, 1.0]) @ U.conj().T
        assert np.max(np.abs(P - expected)) < 1e-10


class TestKron:
    def test_identity(self):
        assert np.allclose(kron(identity(2), identity(2)), identity(4))

    def test_sigma_z_identity(self):
        assert np.allclose(kron(sigma_z, identity(2)), np.diag([1, 1, -1, -1]))

    def test_sigma_x_sigma_y_hand_expansion(self):
        expected = np.zeros((4, 4), dtype=complex)
        expected[0, 3] = -1j
        expected[1, 2] = 1j
        expected[2, 1] = -1j
        expected[3, 0] = 1j
        assert np.allclose(kron(sigma_x, sigma_y), expected)

    def test_overflow_rejected(self):
        with pytest.raises(ValueError, match="exceeds"):
            kron(identity(8), identity(4))


class TestAlgebra:
    def test_pauli_commutator(self):
        assert np.allclose(commutator(sigma_x, sigma_y), 2j * sigma_z)

    def test_pauli_anticommutator(self):
        assert np.allclose(anticommutator(sigma_x, sigma_z), np.zeros((2, 2)))

    def test_hs_norm(self):
        assert hs_norm_sq(1j * sigma_y) == pytest.approx(2.0)

    def test_trace(self):
        assert trace_of(np.diag([1.0, 2.0, 3.0 + 1j])) == pytest.approx(6.0 + 1j)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError, match="mismatch"):
            commutator(sigma_x, identity(3))

    def test_commutator_anti_hermitian(self, rng):
        for _ in range(50):
            A = random_hermitian(rng, 4)
            B = random_hermitian(rng, 4)
            C = commutator(A, B)
            D = anticommutator(A, B)
            assert np.max(np.abs(C + C.conj().T)) < 1e-12
            assert np.max(np.abs(D - D.conj().T)) < 1e-12

    def test_hs_norm_nonnegative_and_diagonal_case(self, rng):
        for _ in range(20):
            M = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
            assert hs_norm_sq(M) >= 0
        d = np.diag([1.0, -2.0, 0.5])
        assert hs_norm_sq(d) == pytest.approx(np.sum(np.diag(d) ** 2))

    def test_as_matrix_rejects_non_square(self):
        with pytest.raises(ValueError, match="square"):
            as_matrix(np.zeros((2, 3)))
