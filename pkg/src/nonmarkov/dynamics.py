"""Time-local Lindblad evolution of states and intermediate-interval Choi states.

The generator is d rho/dt = -i[H(t), rho] + sum_i G_i(t) (L_i rho L_i^dag
- 1/2 {L_i^dag L_i, rho}). Propagation uses classical fixed-step RK4 with
re-symmetrisation after every step. The Choi state of the map over a short
interval [t, t+eps] is obtained by evolving the (unit-trace) maximally
entangled state under the lifted generator I (x) L_s; a negative eigenvalue
of the result certifies CP-indivisibility on that interval.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from .matrix_core import (
    as_matrix,
    hermitian_eig,
    identity,
    kron,
    require_hermitian,
)

RateFunction = Callable[[float], float]

DEFAULT_EPSILON = 0.01
DEFAULT_STATE_DT = 1e-3
BLOWUP_EIG_TOL = -1e-6


class PositivityBlowupError(ArithmeticError):
    """Integration produced a state with a significantly negative eigenvalue."""


def constant_rate(value: float) -> RateFunction:
    def rate(t: float) -> float:
        return value
    return rate


def tabulated_rate(times: Sequence[float], values: Sequence[float]) -> RateFunction:
    """Linear interpolation inside the sample range, constant outside."""
    ts = np.asarray(times, dtype=float)
    vs = np.asarray(values, dtype=float)
    if ts.ndim != 1 or ts.shape != vs.shape or ts.size < 2:
        raise ValueError("need two equal-length 1-d sample arrays with >= 2 points")
    if not np.all(np.diff(ts) > 0):
        raise ValueError("sample times must be strictly increasing")

    def rate(t: float) -> float:
        return float(np.interp(t, ts, vs))

    return rate


@dataclass(frozen=True)
class LindbladGenerator:
    """Hamiltonian part plus (Lindblad operator, rate function) channels."""

    dim: int
    channels: Tuple[Tuple[np.ndarray, RateFunction], ...] = ()
    hamiltonian: Optional[Callable[[float], np.ndarray]] = None

    def __post_init__(self):
        for L, _ in self.channels:
            L = as_matrix(L)
            if L.shape[0] != self.dim:
                raise ValueError(f"channel operator dimension {L.shape[0]} != generator dim {self.dim}")

    def rates_at(self, t: float) -> np.ndarray:
        return np.array([rate(t) for _, rate in self.channels], dtype=float)


@dataclass(frozen=True)
class ChoiState:
    """Unit-trace Hermitian d^2 x d^2 matrix for the map over (t, t+epsilon).

    Not required to be PSD: negativity is exactly the non-Markovianity signal.
    """

    matrix: np.ndarray
    t: float
    epsilon: float


def maximally_entangled(dim: int) -> np.ndarray:
    """|phi><phi| with |phi> = (1/sqrt(d)) sum_i |ii>, normalised to unit trace."""
    phi = np.zeros(dim * dim, dtype=complex)
    for i in range(dim):
        phi[i * dim + i] = 1.0
    phi /= np.sqrt(dim)
    return np.outer(phi, phi.conj())


def validate_density_matrix(M, trace_tol: float = 1e-10, eig_tol: float = 1e-10) -> np.ndarray:
    """Entry point for callers that want physical-state guarantees."""
    A = require_hermitian(M)
    tr = complex(np.trace(A))
    if abs(tr - 1.0) > trace_tol:
        raise ValueError(f"trace {tr} is not 1 within {trace_tol}")
    lo = hermitian_eig(A).eigenvalues[0]
    if lo < -eig_tol:
        raise ValueError(f"matrix has negative eigenvalue {lo}")
    return A


def lindblad_rhs(gen: LindbladGenerator, t: float, rho: np.ndarray) -> np.ndarray:
    """Right-hand side of the master equation at time t."""
    rho = as_matrix(rho)
    if rho.shape[0] != gen.dim:
        raise ValueError(f"state dimension {rho.shape[0]} != generator dim {gen.dim}")
    out = np.zeros_like(rho)
    if gen.hamiltonian is not None:
        H = gen.hamiltonian(t)
        out += -1j * (H @ rho - rho @ H)
    for L, rate in gen.channels:
        g = rate(t)
        if g == 0.0:
            continue
        Ld = L.conj().T
        LdL = Ld @ L
        out += g * (L @ rho @ Ld - 0.5 * (LdL @ rho + rho @ LdL))
    return out


def _rk4_evolve(rhs, C: np.ndarray, t0: float, t1: float, dt: float,
                renormalize: bool = False) -> np.ndarray:
    """Fixed-step RK4 with per-step re-symmetrisation (M + M^dag)/2."""
    span = t1 - t0
    if span == 0.0:
        return C.copy()
    n = max(1, int(round(span / dt)))
    h = span / n
    M = C.copy()
    t = t0
    for _ in range(n):
        k1 = rhs(t, M)
        k2 = rhs(t + 0.5 * h, M + 0.5 * h * k1)
        k3 = rhs(t + 0.5 * h, M + 0.5 * h * k2)
        k4 = rhs(t + h, M + h * k3)
        M = M + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        M = (M + M.conj().T) / 2
        if renormalize:
            M = M / np.trace(M).real
        t += h
    return M


def propagate_state(gen: LindbladGenerator, rho0: np.ndarray, t0: float, t1: float,
                    dt: float = DEFAULT_STATE_DT) -> np.ndarray:
    """Evolve a physical state from t0 to t1; trace is renormalised per step."""
    if t1 < t0:
        raise ValueError("t1 must be >= t0")
    if dt <= 0:
        raise ValueError("dt must be positive")
    rho0 = require_hermitian(rho0)

    def rhs(t, rho):
        return lindblad_rhs(gen, t, rho)

    rho = _rk4_evolve(rhs, rho0, t0, t1, dt, renormalize=True)
    lo = hermitian_eig(rho).eigenvalues[0]
    if lo < BLOWUP_EIG_TOL:
        raise PositivityBlowupError(
            f"propagated state has eigenvalue {lo:.3e} < {BLOWUP_EIG_TOL} "
            f"(integration blow-up; generator window [{t0}, {t1}], dt={dt})"
        )
    return rho


def lift_generator(gen: LindbladGenerator) -> LindbladGenerator:
    """Extend gen to act on the second factor of a d (x) d system: I (x) L_s."""
    eye = identity(gen.dim)
    channels = tuple((kron(eye, L), rate) for L, rate in gen.channels)
    ham = None
    if gen.hamiltonian is not None:
        base = gen.hamiltonian
        def ham(t, _base=base, _eye=eye):
            return kron(_eye, _base(t))
    return LindbladGenerator(dim=gen.dim * gen.dim, channels=channels, hamiltonian=ham)


def intermediate_choi(gen: LindbladGenerator, t: float, epsilon: float,
                      dt: Optional[float] = None) -> ChoiState:
    """Choi state of the intermediate map over [t, t+epsilon]."""
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    if dt is None:
        dt = epsilon / 100.0
    if dt > epsilon:
        raise ValueError("dt must not exceed epsilon")
    lifted = lift_generator(gen)
    C0 = maximally_entangled(gen.dim)

    # Inline the rhs with precomputed lifted operators; this is the hot loop.
    ham = lifted.hamiltonian
    ops = [(L, L.conj().T, L.conj().T @ L, rate) for L, rate in lifted.channels]

    def rhs(s, C):
        out = np.zeros_like(C)
        if ham is not None:
            H = ham(s)
            out += -1j * (H @ C - C @ H)
        for L, Ld, LdL, rate in ops:
            g = rate(s)
            if g == 0.0:
                continue
            out += g * (L @ C @ Ld - 0.5 * (LdL @ C + C @ LdL))
        return out

    C = _rk4_evolve(rhs, C0, t, t + epsilon, dt, renormalize=False)
    tr = np.trace(C).real
    if abs(tr - 1.0) > 1e-8:
        raise ArithmeticError(f"Choi trace drifted to {tr} (expected 1 within 1e-8)")
    return ChoiState(matrix=C, t=t, epsilon=epsilon)


def min_choi_eigenvalue(C) -> float:
    """Smallest eigenvalue of a Choi state (or raw unit-trace Hermitian matrix)."""
    M = C.matrix if isinstance(C, ChoiState) else as_matrix(C)
    return float(hermitian_eig(M).eigenvalues[0])
