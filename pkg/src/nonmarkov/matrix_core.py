"""Dense complex small-matrix arithmetic and Hermitian spectral decomposition.

Everything here operates on tiny operator-algebra matrices (qubit operators
and their tensor squares), stored as numpy complex128 arrays. The eigensolver
is a cyclic Jacobi iteration specialised to Hermitian input: at these sizes
(dim <= 16) it is simple, deterministic and accurate to well below the 1e-10
tolerances used downstream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

MAX_DIM = 16
HERMITIAN_TOL = 1e-12

sigma_x = np.array([[0, 1], [1, 0]], dtype=complex)
sigma_y = np.array([[0, -1j], [1j, 0]], dtype=complex)
sigma_z = np.array([[1, 0], [0, -1]], dtype=complex)
sigma_plus = np.array([[0, 1], [0, 0]], dtype=complex)    # raises |1> -> |0>
sigma_minus = np.array([[0, 0], [1, 0]], dtype=complex)

PAULIS = (sigma_x, sigma_y, sigma_z)


def identity(dim: int) -> np.ndarray:
    return np.eye(dim, dtype=complex)


def as_matrix(M) -> np.ndarray:
    """Coerce to a square complex matrix within the supported size range."""
    A = np.asarray(M, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {A.shape}")
    if A.shape[0] < 1 or A.shape[0] > MAX_DIM:
        raise ValueError(f"dimension {A.shape[0]} outside supported range 1..{MAX_DIM}")
    return A


def is_hermitian(M, tol: float = HERMITIAN_TOL) -> bool:
    A = np.asarray(M, dtype=complex)
    return bool(np.max(np.abs(A - A.conj().T)) <= tol)


def require_hermitian(M, tol: float = HERMITIAN_TOL) -> np.ndarray:
    A = as_matrix(M)
    dev = float(np.max(np.abs(A - A.conj().T)))
    if dev > tol:
        raise ValueError(f"matrix is not Hermitian (max |M - M^dag| = {dev:.3e})")
    return A


def require_same_dim(A: np.ndarray, B: np.ndarray) -> None:
    if A.shape != B.shape:
        raise ValueError(f"dimension mismatch: {A.shape} vs {B.shape}")


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues (ascending) and matching orthonormal eigenvector columns."""

    eigenvalues: np.ndarray      # real, ascending
    eigenvectors: np.ndarray     # column i pairs with eigenvalues[i]

    def reconstruct(self) -> np.ndarray:
        V = self.eigenvectors
        return (V * self.eigenvalues) @ V.conj().T

    def projector(self, i: int) -> np.ndarray:
        v = self.eigenvectors[:, i]
        return np.outer(v, v.conj())


def hermitian_eig(M, tol: float = 1e-13, max_sweeps: int = 100) -> SpectralDecomposition:
    """Cyclic Jacobi diagonalisation of a Hermitian matrix.

    Sweeps row-cyclically over the upper triangle, annihilating each
    off-diagonal element with a complex Givens rotation, until the largest
    off-diagonal modulus drops below ``tol``. Deterministic for identical
    input: pivot order is fixed and no pivot thresholding is applied.
    """
    A = require_hermitian(M).copy()
    n = A.shape[0]
    A = (A + A.conj().T) / 2
    V = np.eye(n, dtype=complex)
    if n == 1:
        return SpectralDecomposition(np.array([A[0, 0].real]), V)

    for _ in range(max_sweeps):
        off = 0.0
        for p in range(n - 1):
            m = np.max(np.abs(A[p, p + 1:]))
            if m > off:
                off = float(m)
        if off < tol:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                r = abs(apq)
                if r == 0.0:
                    continue
                phase = apq / r
                tau = (A[q, q].real - A[p, p].real) / (2.0 * r)
                if tau == 0.0:
                    t = 1.0
                else:
                    t = math.copysign(1.0, tau) / (abs(tau) + math.hypot(1.0, tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                # A <- G^dag A G with G embedding [[c, s*phase], [-s/phase, c]]
                col_p = A[:, p].copy()
                col_q = A[:, q].copy()
                A[:, p] = c * col_p - s * np.conj(phase) * col_q
                A[:, q] = s * phase * col_p + c * col_q
                row_p = A[p, :].copy()
                row_q = A[q, :].copy()
                A[p, :] = c * row_p - s * phase * row_q
                A[q, :] = s * np.conj(phase) * row_p + c * row_q
                A[p, q] = 0.0
                A[q, p] = 0.0
                vp = V[:, p].copy()
                vq = V[:, q].copy()
                V[:, p] = c * vp - s * np.conj(phase) * vq
                V[:, q] = s * phase * vp + c * vq
    else:
        raise ArithmeticError(f"Jacobi iteration did not converge in {max_sweeps} sweeps")

    vals = np.real(np.diag(A))
    order = np.argsort(vals, kind="stable")
    return SpectralDecomposition(vals[order], V[:, order])


def kron(A, B) -> np.ndarray:
    """Tensor product with the supported-size cap enforced on the output."""
    A = as_matrix(A)
    B = as_matrix(B)
    if A.shape[0] * B.shape[0] > MAX_DIM:
        raise ValueError(
            f"tensor product dimension {A.shape[0] * B.shape[0]} exceeds supported maximum {MAX_DIM}"
        )
    return np.kron(A, B)


def commutator(A, B) -> np.ndarray:
    A = as_matrix(A)
    B = as_matrix(B)
    require_same_dim(A, B)
    return A @ B - B @ A


def anticommutator(A, B) -> np.ndarray:
    A = as_matrix(A)
    B = as_matrix(B)
    require_same_dim(A, B)
    return A @ B + B @ A


def hs_norm_sq(M) -> float:
    """Squared Hilbert-Schmidt norm Tr[M^dag M]."""
    A = as_matrix(M)
    return float(np.sum(np.abs(A) ** 2))


def trace_of(M) -> complex:
    return complex(np.trace(as_matrix(M)))
