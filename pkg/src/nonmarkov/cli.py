"""Command-line surface: model scans, rate-expression parsing, CSV emission.

Output format is deterministic: '#'-prefixed provenance metadata, a CSV
header, then one row per grid time with values printed at 12 significant
digits and '\\n' line endings. Exit codes: 0 success, 2 config/parse error,
3 numerical failure (pole, blow-up).
"""

from __future__ import annotations

import argparse
import csv as csv_mod
import sys
from typing import List, Optional

import numpy as np

from .dynamics import (
    DEFAULT_EPSILON,
    LindbladGenerator,
    PositivityBlowupError,
    RateFunction,
    intermediate_choi,
)
from .matrix_core import kron, require_hermitian, sigma_x, sigma_y
from .models import (
    DephasingParams,
    RatePoleError,
    SpinBathParams,
    dephasing_first_pole,
    dephasing_generator,
    load_rate_table,
    spinbath_generator,
)
from .quantifier import NonUnitalError, unital_scan
from .rate_expr import RateParseError, parse_rate_expr
from .uncertainty import BlochDirections, rs_lhs, sum_uncertainty
from .witnesses import WitnessReport, detect

EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

POLE_MARGIN = 0.1

# fixed observable pair used by the Choi-state scans
DEFAULT_OBS_A = kron(sigma_x, sigma_y)
DEFAULT_OBS_B = kron(sigma_x, sigma_x)

DEMO_DEPH = "0.1 - 0.25*exp(-((t-3)/0.8)^2)"
DEMO_DIS = "0.05"
DEMO_ABS = "0.05"
DEMO_UNITARY = "0"


def _fmt(x: float) -> str:
    return "%.12g" % x


def _rate_from_spec(text: str) -> RateFunction:
    """Expression text, or '@path.csv' for a tabulated rate."""
    if text.startswith("@"):
        return load_rate_table(text[1:])
    return parse_rate_expr(text)


def _parse_direction(text: str) -> np.ndarray:
    parts = text.split(",")
    if len(parts) != 3:
        raise ValueError(f"direction must be 'x,y,z', got {text!r}")
    v = np.array([float(p) for p in parts])
    norm = np.linalg.norm(v)
    if norm == 0:
        raise ValueError("direction vector must be nonzero")
    return v / norm


def _write_output(lines: List[str], out: Optional[str]) -> None:
    text = "\n".join(lines) + "\n"
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", newline="") as fh:
            fh.write(text)


def _grid(t_min: float, t_max: float, dt: float) -> List[float]:
    if not t_max > t_min:
        raise ValueError("t_max must exceed t_min")
    if dt <= 0:
        raise ValueError("dt must be positive")
    n = int((t_max - t_min) / dt + 1e-9)
    return [t_min + i * dt for i in range(n + 1)]


def _scan_rows(gen: LindbladGenerator, times: List[float], epsilon: float,
               choi_dt: Optional[float]) -> List[str]:
    rows = []
    for t in times:
        rates = gen.rates_at(t)
        C = intermediate_choi(gen, t, epsilon, dt=choi_dt)
        report = detect(C)
        r_val = rs_lhs(DEFAULT_OBS_A, DEFAULT_OBS_B, C.matrix)
        s_lhs, s_rhs = sum_uncertainty(DEFAULT_OBS_A, DEFAULT_OBS_B, C.matrix)
        cells = [_fmt(t)] + [_fmt(g) for g in rates] + [
            _fmt(report.min_eigenvalue), _fmt(r_val), _fmt(s_lhs), _fmt(s_rhs),
            report.verdict.value,
        ]
        rows.append(",".join(cells))
    return rows


def _scan_header(n_rates: int) -> str:
    rate_cols = [f"rate_{i + 1}" for i in range(n_rates)]
    return ",".join(["t"] + rate_cols + ["min_choi_eig", "rs_lhs", "sum_lhs",
                                         "sum_rhs", "verdict"])


def cmd_dephasing(args) -> int:
    p = DephasingParams(lam=args.lam, gamma0=args.gamma0)
    lines = [
        f"# model=dephasing lambda={_fmt(args.lam)} gamma0={_fmt(args.gamma0)}",
        f"# t_min={_fmt(args.t_min)} t_max={_fmt(args.t_max)} dt={_fmt(args.dt)}"
        f" epsilon={_fmt(args.epsilon)} choi_dt={_fmt(args.choi_dt or args.epsilon / 100)}"
        " seed=none",
        "# observables=sigma_x(x)sigma_y,sigma_x(x)sigma_x",
    ]
    t_max = args.t_max
    pole = dephasing_first_pole(p)
    if pole is not None and t_max + args.epsilon > pole - POLE_MARGIN:
        t_max = pole - POLE_MARGIN - args.epsilon
        if t_max <= args.t_min:
            raise RatePoleError(
                f"scan window empty after clipping before the gamma(t) pole at t = {pole}",
                pole_time=pole,
            )
        lines.append(f"# pole_clip t_pole={_fmt(pole)} t_max_effective={_fmt(t_max)}")
    times = _grid(args.t_min, t_max, args.dt)
    gen = dephasing_generator(p)
    lines.append(_scan_header(1))
    lines.extend(_scan_rows(gen, times, args.epsilon, args.choi_dt))
    _write_output(lines, args.out)
    return 0


def _spinbath_from_args(args) -> SpinBathParams:
    return SpinBathParams(
        unitary=_rate_from_spec(args.unitary),
        rate_deph=_rate_from_spec(args.rate_deph),
        rate_dis=_rate_from_spec(args.rate_dis),
        rate_abs=_rate_from_spec(args.rate_abs),
    )


def cmd_spinbath(args) -> int:
    gen = spinbath_generator(_spinbath_from_args(args))
    lines = [
        f"# model=spinbath rate_deph={args.rate_deph!r} rate_dis={args.rate_dis!r}"
        f" rate_abs={args.rate_abs!r} unitary={args.unitary!r}",
        f"# t_min={_fmt(args.t_min)} t_max={_fmt(args.t_max)} dt={_fmt(args.dt)}"
        f" epsilon={_fmt(args.epsilon)} choi_dt={_fmt(args.choi_dt or args.epsilon / 100)}"
        " seed=none",
        "# observables=sigma_x(x)sigma_y,sigma_x(x)sigma_x",
    ]
    times = _grid(args.t_min, args.t_max, args.dt)
    lines.append(_scan_header(3))
    lines.extend(_scan_rows(gen, times, args.epsilon, args.choi_dt))
    _write_output(lines, args.out)
    return 0


def cmd_unital(args) -> int:
    gen = spinbath_generator(_spinbath_from_args(args))
    r = _parse_direction(args.r)
    t_dir = _parse_direction(args.t_dir)
    dirs = BlochDirections(r=r, t=t_dir)
    rho0 = np.array([[0.5, 0.5], [0.5, 0.5]], dtype=complex)  # |+><+|
    scan = unital_scan(gen, rho0, dirs, args.t_max, args.dt)
    lines = [
        f"# model=spinbath rate_deph={args.rate_deph!r} rate_dis={args.rate_dis!r}"
        f" rate_abs={args.rate_abs!r} unitary={args.unitary!r}",
        f"# t_max={_fmt(args.t_max)} dt={_fmt(args.dt)}"
        f" r={args.r} t_dir={args.t_dir} initial_state=plus seed=none",
        ",".join(["t"] + [f"rate_{i + 1}" for i in range(scan.rates.shape[1])]
                 + ["R", "dRdt", "S_l"]),
    ]
    for i, t in enumerate(scan.times):
        cells = [_fmt(t)] + [_fmt(g) for g in scan.rates[i]] + [
            _fmt(scan.rs_values[i]), _fmt(scan.rs_rates[i]),
            _fmt(scan.linear_entropies[i]),
        ]
        lines.append(",".join(cells))
    lines.append(f"# N={_fmt(scan.quantifier)}")
    _write_output(lines, args.out)
    return 0


def _load_matrix_csv(path: str) -> np.ndarray:
    """Each CSV line is one matrix row as alternating re,im fields."""
    rows = []
    with open(path, newline="") as fh:
        for lineno, row in enumerate(csv_mod.reader(fh), start=1):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            vals = [float(x) for x in row]
            if len(vals) % 2 != 0:
                raise ValueError(f"{path}:{lineno}: odd number of fields "
                                 "(need re,im pairs)")
            rows.append([complex(vals[2 * i], vals[2 * i + 1])
                         for i in range(len(vals) // 2)])
    M = np.array(rows, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"{path}: matrix is not square (shape {M.shape})")
    return M


def report_csv_row(report: WitnessReport) -> str:
    rs = "" if report.rs_pair_value is None else _fmt(report.rs_pair_value)
    if report.sum_pair_value is None:
        s_lhs = s_rhs = ""
    else:
        s_lhs, s_rhs = (_fmt(v) for v in report.sum_pair_value)
    cells = [
        _fmt(report.min_eigenvalue),
        str(report.negative_count),
        ";".join(_fmt(v) for v in report.projective_values),
        ";".join(_fmt(v) for v in report.variance_witness_values),
        rs, s_lhs, s_rhs,
        report.verdict.value,
    ]
    return ",".join(cells)


REPORT_CSV_HEADER = ("min_eigenvalue,negative_count,projective_values,"
                     "variance_witness_values,rs_pair_value,sum_lhs,sum_rhs,verdict")


def cmd_detect_file(args) -> int:
    M = require_hermitian(_load_matrix_csv(args.matrix))
    report = detect(M, tol=args.tol)
    _write_output([REPORT_CSV_HEADER, report_csv_row(report)], args.out)
    return 0


def _add_grid_flags(sp, with_epsilon: bool = True) -> None:
    sp.add_argument("--t-min", type=float, default=0.0)
    sp.add_argument("--t-max", type=float, required=True)
    sp.add_argument("--dt", type=float, default=0.01)
    if with_epsilon:
        sp.add_argument("--epsilon", type=float, default=DEFAULT_EPSILON)
        sp.add_argument("--choi-dt", type=float, default=None,
                        help="RK4 step for Choi evolution (default epsilon/100)")
    sp.add_argument("--out", default=None, help="output path (default stdout)")


def _add_spinbath_flags(sp) -> None:
    sp.add_argument("--rate-deph", default=DEMO_DEPH,
                    help="dephasing rate: expression in t, or @file.csv")
    sp.add_argument("--rate-dis", default=DEMO_DIS)
    sp.add_argument("--rate-abs", default=DEMO_ABS)
    sp.add_argument("--unitary", default=DEMO_UNITARY,
                    help="coefficient U(t) of the sigma_z Hamiltonian")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nonmarkov",
        description="Detect and quantify non-Markovianity of qubit dynamics "
                    "via uncertainty-relation violations on Choi states.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("dephasing", help="Choi-state scan of the pure dephasing channel")
    sp.add_argument("--lambda", dest="lam", type=float, required=True)
    sp.add_argument("--gamma0", type=float, required=True)
    _add_grid_flags(sp)
    sp.set_defaults(func=cmd_dephasing)

    sp = sub.add_parser("spinbath", help="Choi-state scan of the spin-bath model")
    _add_spinbath_flags(sp)
    _add_grid_flags(sp)
    sp.set_defaults(func=cmd_spinbath)

    sp = sub.add_parser("unital", help="RS-uncertainty trajectory and quantifier N "
                                       "for unital spin-bath dynamics")
    _add_spinbath_flags(sp)
    sp.add_argument("--r", default="1,0,0", help="Bloch direction of observable A")
    sp.add_argument("--t-dir", default="0,1,0", help="Bloch direction of observable B")
    sp.add_argument("--t-max", type=float, default=6.0)
    sp.add_argument("--dt", type=float, default=1e-3)
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_unital)

    sp = sub.add_parser("detect-file", help="witness report for a Hermitian matrix "
                                            "stored as row-major re,im CSV")
    sp.add_argument("--matrix", required=True)
    sp.add_argument("--tol", type=float, default=1e-9)
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_detect_file)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (RateParseError, NonUnitalError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (RatePoleError, PositivityBlowupError, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
