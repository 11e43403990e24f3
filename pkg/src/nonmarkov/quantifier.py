"""RS-uncertainty dynamics of time-evolving states under unital qubit dynamics.

For unital generators the RS functional of a physical qubit state obeys the
closed form
    dR/dt = (d/(d-1)) [1 - (r.t)^2] sum_i G_i(t) Q_i(t),
with Q_i(t) = ||[L_i, rho(t)]||_HS^2 >= 0, so R can only decrease where some
rate G_i(t) is negative. The quantifier N accumulates exactly that decrease.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List

import numpy as np

from .dynamics import LindbladGenerator, lindblad_rhs
from .matrix_core import commutator, hs_norm_sq, identity, require_hermitian
from .uncertainty import BlochDirections, direction_operator, linear_entropy, rs_lhs

UNITALITY_TOL = 1e-10


class NonUnitalError(ValueError):
    """Generator does not fix the maximally mixed state at some sampled time."""

    def __init__(self, message: str, t: float):
        super().__init__(message)
        self.t = t


@dataclass(frozen=True)
class TimeSeries:
    times: np.ndarray
    values: np.ndarray
    metadata: Dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if self.times.shape != self.values.shape or self.times.ndim != 1:
            raise ValueError("times and values must be equal-length 1-d arrays")
        if np.any(np.diff(self.times) <= 0):
            raise ValueError("times must be strictly increasing")


def check_unital(gen: LindbladGenerator, t: float) -> None:
    mixed = identity(gen.dim) / gen.dim
    resid = float(np.max(np.abs(lindblad_rhs(gen, t, mixed))))
    if resid > UNITALITY_TOL:
        raise NonUnitalError(
            f"generator is not unital at t = {t} (|L_t(I/d)| = {resid:.3e})", t=t
        )


def quantumness(V, rho) -> float:
    """Q = ||[V, rho]||_HS^2; vanishes iff V and rho commute."""
    return hs_norm_sq(commutator(V, rho))


def rs_rate_analytic(gen: LindbladGenerator, rho, dirs: BlochDirections,
                     t: float) -> float:
    """Closed-form dR/dt at time t for a unital qubit generator."""
    if gen.dim != 2:
        raise ValueError("analytic rate applies to qubit generators only")
    check_unital(gen, t)
    rho = require_hermitian(rho)
    total = sum(rate(t) * quantumness(L, rho) for L, rate in gen.channels)
    return 2.0 * (1.0 - dirs.overlap ** 2) * total


def _evolve_grid(gen: LindbladGenerator, rho0: np.ndarray, t_max: float,
                 dt: float, enforce_unital: bool = True) -> tuple:
    """RK4 states on the uniform grid 0..t_max; unitality checked per node."""
    if t_max <= 0 or dt <= 0:
        raise ValueError("t_max and dt must be positive")
    rho0 = require_hermitian(rho0)
    n = max(1, int(round(t_max / dt)))
    h = t_max / n
    times = np.linspace(0.0, t_max, n + 1)
    states: List[np.ndarray] = [rho0.copy()]
    rho = rho0.copy()
    for i in range(n):
        t = times[i]
        if enforce_unital:
            check_unital(gen, t)
        k1 = lindblad_rhs(gen, t, rho)
        k2 = lindblad_rhs(gen, t + 0.5 * h, rho + 0.5 * h * k1)
        k3 = lindblad_rhs(gen, t + 0.5 * h, rho + 0.5 * h * k2)
        k4 = lindblad_rhs(gen, t + h, rho + h * k3)
        rho = rho + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        rho = (rho + rho.conj().T) / 2
        rho = rho / np.trace(rho).real
        states.append(rho)
    if enforce_unital:
        check_unital(gen, t_max)
    return times, states


def rs_trajectory(gen: LindbladGenerator, rho0, dirs: BlochDirections,
                  t_max: float, dt: float) -> TimeSeries:
    """R(A, B, rho(t)) on a uniform grid, A = r.sigma and B = t.sigma."""
    A = direction_operator(dirs.r)
    B = direction_operator(dirs.t)
    times, states = _evolve_grid(gen, rho0, t_max, dt)
    values = np.array([rs_lhs(A, B, rho) for rho in states])
    meta = {
        "observables": f"r={dirs.r.tolist()}, t={dirs.t.tolist()}",
        "integrator": f"rk4 dt={dt}",
        "channels": str(len(gen.channels)),
    }
    return TimeSeries(times=times, values=values, metadata=meta)


def nm_quantifier(series: TimeSeries) -> float:
    """N = -integral of dR/dt over decreasing intervals, via series differences."""
    if series.times.size < 2:
        raise ValueError("need at least two samples")
    diffs = np.diff(series.values)
    return float(-diffs[diffs < 0].sum()) + 0.0


def purity_quantifier(gen: LindbladGenerator, rho0, t_max: float, dt: float) -> float:
    """Accumulated decrease of linear entropy; equals N for orthogonal r, t."""
    times, states = _evolve_grid(gen, rho0, t_max, dt)
    sl = np.array([linear_entropy(rho, gen.dim) for rho in states])
    series = TimeSeries(times=times, values=sl)
    return nm_quantifier(series)


@dataclass(frozen=True)
class UnitalScan:
    """Columns of a unital-dynamics scan plus the accumulated quantifier."""

    times: np.ndarray
    rates: np.ndarray            # shape (n_times, n_channels)
    rs_values: np.ndarray
    rs_rates: np.ndarray         # analytic dR/dt
    linear_entropies: np.ndarray
    quantifier: float


def unital_scan(gen: LindbladGenerator, rho0, dirs: BlochDirections,
                t_max: float, dt: float) -> UnitalScan:
    A = direction_operator(dirs.r)
    B = direction_operator(dirs.t)
    times, states = _evolve_grid(gen, rho0, t_max, dt)
    rates = np.array([gen.rates_at(t) for t in times])
    rs_values = np.array([rs_lhs(A, B, rho) for rho in states])
    rs_rates = np.array([rs_rate_analytic(gen, rho, dirs, t)
                         for t, rho in zip(times, states)])
    sl = np.array([linear_entropy(rho, gen.dim) for rho in states])
    n = nm_quantifier(TimeSeries(times=times, values=rs_values))
    return UnitalScan(times=times, rates=rates, rs_values=rs_values,
                      rs_rates=rs_rates, linear_entropies=sl, quantifier=n)
