"""Witness construction from the spectrum of a (possibly negative) Choi state.

Whenever a unit-trace Hermitian matrix has a negative eigenvalue, a pair of
Hermitian operators violating the Robertson-Schroedinger relation can be
built from its eigenbasis: H1 projects onto the most negative eigenvector
(variance lam - lam^2 < 0) and H2 = sum_{k != l} |k><l| over the full basis
(variance n - 1 > 0), so the product term is strictly negative.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Tuple

import numpy as np

from .dynamics import ChoiState
from .matrix_core import as_matrix, hermitian_eig, require_hermitian
from .uncertainty import rs_lhs, sum_uncertainty, variance

DEFAULT_TOL = 1e-9


class PairNotConstructibleError(ValueError):
    """No negative eigenvalue, so the violating pair does not exist."""


class Verdict(str, Enum):
    MARKOVIAN_CONSISTENT = "MARKOVIAN_CONSISTENT"
    NON_MARKOVIAN_DETECTED = "NON_MARKOVIAN_DETECTED"


@dataclass(frozen=True)
class WitnessReport:
    min_eigenvalue: float
    negative_count: int
    projective_values: Tuple[float, ...]
    variance_witness_values: Tuple[float, ...]
    rs_pair_value: Optional[float]
    sum_pair_value: Optional[Tuple[float, float]]
    verdict: Verdict


def _matrix_of(C) -> np.ndarray:
    M = C.matrix if isinstance(C, ChoiState) else C
    return require_hermitian(as_matrix(M))


def negative_eigenspace(C, tol: float = DEFAULT_TOL) -> List[Tuple[float, np.ndarray]]:
    """Eigenpairs with eigenvalue < -tol, ascending (most negative first)."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    dec = hermitian_eig(_matrix_of(C))
    out = []
    for i, lam in enumerate(dec.eigenvalues):
        if lam < -tol:
            out.append((float(lam), dec.eigenvectors[:, i]))
    return out


def construct_rs_violating_pair(C, tol: float = DEFAULT_TOL) -> Tuple[np.ndarray, np.ndarray]:
    """The (H1, H2) pair guaranteed to violate the RS relation on C."""
    M = _matrix_of(C)
    dec = hermitian_eig(M)
    if dec.eigenvalues[0] >= -tol:
        raise PairNotConstructibleError(
            f"minimum eigenvalue {dec.eigenvalues[0]:.3e} is not below -{tol}; "
            "the violating pair exists only for negative Choi states"
        )
    v = dec.eigenvectors[:, 0]
    H1 = np.outer(v, v.conj())
    # sum_{k != l} |k><l| = s s^dag - I with s = sum_k |k>, since the basis is complete
    s = dec.eigenvectors.sum(axis=1)
    H2 = np.outer(s, s.conj()) - np.eye(M.shape[0], dtype=complex)
    return H1, H2


def projective_witness_values(C) -> List[float]:
    """Tr[C P_i] per spectral projector: just the eigenvalue list, ascending."""
    dec = hermitian_eig(_matrix_of(C))
    return [float(x) for x in dec.eigenvalues]


def variance_witness(C, W) -> float:
    """Variance of a Hermitian witness over C; the non-linear witness value."""
    return variance(require_hermitian(W), _matrix_of(C))


def detect(C, tol: float = DEFAULT_TOL) -> WitnessReport:
    """Full verdict for one Choi state (or raw unit-trace Hermitian matrix)."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    M = _matrix_of(C)
    dec = hermitian_eig(M)
    vals = dec.eigenvalues
    min_eig = float(vals[0])
    neg_idx = [i for i, lam in enumerate(vals) if lam < -tol]
    projective = tuple(float(x) for x in vals)
    var_values = tuple(float(lam - lam * lam) for lam in vals)

    rs_pair_value = None
    sum_pair_value = None
    if neg_idx:
        H1, H2 = construct_rs_violating_pair(C, tol=tol)
        rs_pair_value = rs_lhs(H1, H2, M)
        if len(neg_idx) >= 2:
            # Two most-negative projectors: orthogonal, commuting witnesses
            P1 = dec.projector(neg_idx[0])
            P2 = dec.projector(neg_idx[1])
            sum_pair_value = sum_uncertainty(P1, P2, M)

    verdict = (Verdict.NON_MARKOVIAN_DETECTED if min_eig < -tol
               else Verdict.MARKOVIAN_CONSISTENT)
    return WitnessReport(
        min_eigenvalue=min_eig,
        negative_count=len(neg_idx),
        projective_values=projective,
        variance_witness_values=var_values,
        rs_pair_value=rs_pair_value,
        sum_pair_value=sum_pair_value,
        verdict=verdict,
    )
