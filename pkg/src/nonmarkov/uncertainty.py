"""Uncertainty functionals over unit-trace Hermitian matrices.

All functionals deliberately accept inputs that are *not* positive
semi-definite: evaluating them on negative Choi states is the whole
detection scheme. Callers wanting physical-state guarantees should run
``dynamics.validate_density_matrix`` first.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from .matrix_core import (
    PAULIS,
    anticommutator,
    as_matrix,
    commutator,
    identity,
    require_hermitian,
    require_same_dim,
)

STATE_TRACE_TOL = 1e-8
EXPECT_IMAG_TOL = 1e-10
VIOLATION_TOL = 1e-9


@dataclass(frozen=True)
class BlochDirections:
    """Unit Bloch vectors r and t defining A = r.sigma and B = t.sigma."""

    r: np.ndarray
    t: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "r", np.asarray(self.r, dtype=float))
        object.__setattr__(self, "t", np.asarray(self.t, dtype=float))
        for name, v in (("r", self.r), ("t", self.t)):
            if v.shape != (3,):
                raise ValueError(f"{name} must be a 3-vector")
            if abs(np.linalg.norm(v) - 1.0) > 1e-12:
                raise ValueError(f"{name} must be a unit vector")

    @property
    def overlap(self) -> float:
        return float(np.dot(self.r, self.t))


def direction_operator(v) -> np.ndarray:
    """n . sigma for a real 3-vector n."""
    v = np.asarray(v, dtype=float)
    return sum(v[i] * PAULIS[i] for i in range(3))


def bloch_state(n) -> np.ndarray:
    """(I + n.sigma)/2."""
    return (identity(2) + direction_operator(n)) / 2.0


def _check_state(state: np.ndarray) -> np.ndarray:
    state = as_matrix(state)
    tr = complex(np.trace(state))
    if abs(tr - 1.0) > STATE_TRACE_TOL:
        raise ValueError(f"state trace {tr} is not 1 within {STATE_TRACE_TOL}")
    return state


def expectation(M, state) -> float:
    """Re Tr[state M] with the imaginary residue asserted negligible."""
    M = as_matrix(M)
    state = _check_state(state)
    require_same_dim(M, state)
    val = complex(np.trace(state @ M))
    if abs(val.imag) > EXPECT_IMAG_TOL:
        raise ArithmeticError(f"expectation has imaginary residue {val.imag:.3e}")
    return val.real


def variance(M, state) -> float:
    """<M^2> - <M>^2; may be negative when the state is not PSD."""
    M = as_matrix(M)
    mean = expectation(M, state)
    second = expectation(M @ M, state)
    return second - mean * mean


def rs_lhs(A, B, state) -> float:
    """Left-hand side of the Robertson-Schroedinger relation.

    D2A * D2B - |<[A,B]>|^2 / 4 - |<{A,B}> - 2<A><B>|^2 / 4, nonnegative on
    every PSD state; a value below -VIOLATION_TOL flags a non-PSD input.
    """
    A = require_hermitian(A)
    B = require_hermitian(B)
    require_same_dim(A, B)
    state = _check_state(state)
    ea = expectation(A, state)
    eb = expectation(B, state)
    va = expectation(A @ A, state) - ea * ea
    vb = expectation(B @ B, state) - eb * eb
    comm = complex(np.trace(state @ commutator(A, B)))
    anti = complex(np.trace(state @ anticommutator(A, B)))
    return (va * vb
            - 0.25 * abs(comm) ** 2
            - 0.25 * abs(anti - 2.0 * ea * eb) ** 2)


def sum_uncertainty(A, B, state) -> Tuple[float, float]:
    """(lhs, rhs) of D2A + D2B >= |<[A,B]>|; violated iff lhs < rhs."""
    A = require_hermitian(A)
    B = require_hermitian(B)
    require_same_dim(A, B)
    state = _check_state(state)
    lhs = variance(A, state) + variance(B, state)
    rhs = abs(complex(np.trace(state @ commutator(A, B))))
    return lhs, rhs


def variance_convexity_gap(observables: Sequence, components: Sequence,
                           weights: Sequence[float]) -> float:
    """sum_i D2(A_i) on the mixture minus the weighted component variances.

    Nonnegative whenever the components are valid states; equals
    sum_k p_k sum_i (<A_i>_k - <A_i>)^2 identically.
    """
    weights = np.asarray(weights, dtype=float)
    if len(components) != len(weights):
        raise ValueError("components and weights must have equal length")
    if np.any(weights < 0):
        raise ValueError("weights must be nonnegative")
    if abs(weights.sum() - 1.0) > 1e-10:
        raise ValueError("weights must sum to 1")
    comps = [_check_state(C) for C in components]
    obs = [require_hermitian(A) for A in observables]
    mixture = sum(p * C for p, C in zip(weights, comps))
    total = sum(variance(A, mixture) for A in obs)
    parts = sum(p * sum(variance(A, C) for A in obs)
                for p, C in zip(weights, comps))
    return total - parts


def linear_entropy(rho, d: int) -> float:
    """(d/(d-1)) (1 - Tr rho^2)."""
    if d < 2:
        raise ValueError("d must be at least 2")
    rho = as_matrix(rho)
    purity = float(np.real(np.trace(rho @ rho)))
    return (d / (d - 1.0)) * (1.0 - purity)


def rs_factorized(dirs: BlochDirections, rho) -> float:
    """[1 - (r.t)^2] * S_l(rho); closed form of rs_lhs for qubit Bloch observables."""
    rho = as_matrix(rho)
    if rho.shape[0] != 2:
        raise ValueError("factorized form applies to qubit states only")
    return (1.0 - dirs.overlap ** 2) * linear_entropy(rho, 2)
