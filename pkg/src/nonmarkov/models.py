"""Concrete qubit channels: pure dephasing and the spin-bath model.

The dephasing channel comes with a closed-form rate
    gamma(t) = 2*lam*g0*sinh(t*g/2) / (g*cosh(t*g/2) + lam*sinh(t*g/2)),
    g = sqrt(lam^2 - 2*g0*lam),
which turns negative somewhere iff g0 > lam/2 (the channel's
non-Markovianity criterion), and an analytic Choi-state oracle used to
validate the numeric propagator. The spin-bath model ships as structure
only; its rate functions are inputs, plus a demonstration family with a
tunable negative-rate window (not taken from any microscopic derivation).
"""

from __future__ import annotations

import cmath
import csv
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .dynamics import ChoiState, LindbladGenerator, RateFunction, tabulated_rate
from .matrix_core import sigma_minus, sigma_plus, sigma_z

POLE_DENOM_TOL = 1e-14
IMAG_RESIDUE_TOL = 1e-12


class RatePoleError(ArithmeticError):
    """Rate evaluation hit (or an integration interval contains) a pole."""

    def __init__(self, message: str, pole_time: Optional[float] = None):
        super().__init__(message)
        self.pole_time = pole_time


@dataclass(frozen=True)
class DephasingParams:
    lam: float
    gamma0: float

    def __post_init__(self):
        if self.lam <= 0 or self.gamma0 <= 0:
            raise ValueError("lam and gamma0 must be positive")

    @property
    def g(self) -> complex:
        return cmath.sqrt(complex(self.lam * self.lam - 2.0 * self.gamma0 * self.lam))


@dataclass(frozen=True)
class SpinBathParams:
    unitary: RateFunction        # U(t) multiplying sigma_z in the Hamiltonian
    rate_deph: RateFunction
    rate_dis: RateFunction
    rate_abs: RateFunction


def dephasing_rate(p: DephasingParams, t: float) -> float:
    """gamma(t); evaluated with complex arithmetic so the g^2 < 0 branch needs
    no separate trigonometric continuation."""
    if t < 0:
        raise ValueError("t must be >= 0")
    g = p.g
    if abs(g) < 1e-12:
        # g -> 0 limit of the formula (gamma0 == lam/2 exactly)
        return p.lam * p.gamma0 * t / (1.0 + p.lam * t / 2.0)
    x = t * g / 2.0
    num = 2.0 * p.lam * p.gamma0 * cmath.sinh(x)
    den = g * cmath.cosh(x) + p.lam * cmath.sinh(x)
    if abs(den) < POLE_DENOM_TOL:
        raise RatePoleError(f"gamma(t) pole at t = {t}", pole_time=t)
    val = num / den
    if abs(val.imag) > IMAG_RESIDUE_TOL:
        raise ArithmeticError(f"gamma(t) imaginary residue {val.imag:.3e} at t = {t}")
    return val.real


def dephasing_first_pole(p: DephasingParams) -> Optional[float]:
    """First positive pole of gamma(t); None when gamma0 <= lam/2."""
    if p.gamma0 <= p.lam / 2.0:
        return None
    w = math.sqrt(2.0 * p.gamma0 * p.lam - p.lam * p.lam)
    # denominator i*(w*cos(w t/2) + lam*sin(w t/2)) first vanishes at:
    return 2.0 * (math.pi - math.atan(w / p.lam)) / w


def dephasing_generator(p: DephasingParams) -> LindbladGenerator:
    """Single sigma_z channel; sigma_z^dag sigma_z = I reproduces the -rho term."""
    def rate(t: float) -> float:
        return dephasing_rate(p, t)
    return LindbladGenerator(dim=2, channels=((sigma_z, rate),))


def _adaptive_simpson(f, a: float, b: float, tol: float, depth: int = 50) -> float:
    fa, fm, fb = f(a), f((a + b) / 2.0), f(b)
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    return _simpson_step(f, a, b, fa, fm, fb, whole, tol, depth)


def _simpson_step(f, a, b, fa, fm, fb, whole, tol, depth):
    m = (a + b) / 2.0
    lm = f((a + m) / 2.0)
    rm = f((m + b) / 2.0)
    left = (m - a) / 6.0 * (fa + 4.0 * lm + fm)
    right = (b - m) / 6.0 * (fm + 4.0 * rm + fb)
    if depth <= 0 or abs(left + right - whole) <= 15.0 * tol:
        return left + right + (left + right - whole) / 15.0
    return (_simpson_step(f, a, m, fa, lm, fm, left, tol / 2.0, depth - 1)
            + _simpson_step(f, m, b, fm, rm, fb, right, tol / 2.0, depth - 1))


def dephasing_rate_integral(p: DephasingParams, t0: float, t1: float,
                            tol: float = 1e-12) -> float:
    pole = dephasing_first_pole(p)
    if pole is not None and t0 <= pole <= t1:
        raise RatePoleError(
            f"gamma(t) has a pole at t = {pole} inside [{t0}, {t1}]", pole_time=pole
        )
    return _adaptive_simpson(lambda s: dephasing_rate(p, s), t0, t1, tol)


def choi_from_decoherence_factor(q: float) -> np.ndarray:
    """Choi matrix of the qubit map that scales coherences by q.

    (|00><00| + |11><11| + q(|00><11| + |11><00|)) / 2, with eigenvalues
    (1 +- q)/2 and 0, 0; not PSD once q > 1.
    """
    C = np.zeros((4, 4), dtype=complex)
    C[0, 0] = C[3, 3] = 0.5
    C[0, 3] = C[3, 0] = 0.5 * q
    return C


def dephasing_choi_exact(p: DephasingParams, t: float, epsilon: float) -> ChoiState:
    """Analytic Choi state of the intermediate dephasing map,
    with q = exp(-2 * int_t^{t+eps} gamma)."""
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    q = math.exp(-2.0 * dephasing_rate_integral(p, t, t + epsilon))
    return ChoiState(matrix=choi_from_decoherence_factor(q), t=t, epsilon=epsilon)


def spinbath_generator(p: SpinBathParams) -> LindbladGenerator:
    """Channels (sigma_z, deph), (sigma_-, dis), (sigma_+, abs); H(t) = U(t) sigma_z."""
    def ham(t: float) -> np.ndarray:
        return p.unitary(t) * sigma_z
    return LindbladGenerator(
        dim=2,
        channels=(
            (sigma_z, p.rate_deph),
            (sigma_minus, p.rate_dis),
            (sigma_plus, p.rate_abs),
        ),
        hamiltonian=ham,
    )


def demo_spinbath_params(base_deph: float = 0.1,
                         dip_depth: float = 0.3,
                         window: Tuple[float, float] = (2.0, 4.0),
                         rate_dis: float = 0.05,
                         rate_abs: Optional[float] = None,
                         u_coeff: float = 0.0) -> SpinBathParams:
    """Demonstration rate family with a tunable negative dephasing window.

    Not derived from the microscopic spin-bath model; it only mimics the
    qualitative shape (one smooth interval where the dephasing rate goes
    negative). Unital when rate_abs == rate_dis (the default). The default
    depth keeps the overall map physical (coherences never exceed their
    initial value) while still forcing a clear uncertainty decrease.
    """
    t1, t2 = window
    if not t2 > t1:
        raise ValueError("window must satisfy t2 > t1")
    if rate_abs is None:
        rate_abs = rate_dis

    def deph(t: float) -> float:
        if t1 <= t <= t2:
            s = math.sin(math.pi * (t - t1) / (t2 - t1))
            return base_deph - dip_depth * s * s
        return base_deph

    def const(v):
        def rate(t: float) -> float:
            return v
        return rate

    return SpinBathParams(
        unitary=const(u_coeff),
        rate_deph=deph,
        rate_dis=const(rate_dis),
        rate_abs=const(rate_abs),
    )


def load_rate_table(path) -> RateFunction:
    """Tabulated rate from a two-column CSV (t, rate) with a header row."""
    ts, vs = [], []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise ValueError(f"{path}: empty rate table")
        try:
            float(header[0])
        except (ValueError, IndexError):
            pass
        else:
            raise ValueError(f"{path}: header row required in rate table")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 2:
                raise ValueError(f"{path}:{lineno}: expected two columns, got {len(row)}")
            ts.append(float(row[0]))
            vs.append(float(row[1]))
    if len(ts) < 2:
        raise ValueError(f"{path}: need at least two samples")
    if not all(b > a for a, b in zip(ts, ts[1:])):
        raise ValueError(f"{path}: sample times must be strictly increasing")
    return tabulated_rate(ts, vs)
