"""Command-line front end.

    ewmt solve  <config>   integrate, write profile CSV and JSON report
    ewmt verify <config>   integrate (or re-read a CSV), run invariant checks
    ewmt sweep  <config>   t0 and classification for each rho0 in sweep.rho0_list
    ewmt plot   <config>   integrate and write the SVG plot

Exit codes: 0 success, 1 failed invariant check, 2 configuration error,
3 solver error, 4 unwritable output path.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
import warnings
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .analysis import verify_invariants
from .config import OUTPUT_DIR_ENV, RunConfig, load_config
from .errors import ConfigError, EWMTError
from .output import read_profile_csv, write_profile_csv, write_report, write_svg, write_sweep_csv
from .profile import ProfileSolution
from .solver import HypothesisWarning, eut_products, solve_profile

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_CONFIG = 2
EXIT_SOLVER = 3
EXIT_UNWRITABLE = 4

# anything the numerical stack can raise once the configuration is valid
SOLVER_ERRORS = (EWMTError, ArithmeticError, ValueError, RuntimeError)


class _Abort(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _error(message: str) -> None:
    print(f"ewmt: error: {message}", file=sys.stderr)


def _require_writable(*paths: Path) -> None:
    for path in paths:
        parent = path.parent if str(path.parent) else Path(".")
        if not parent.is_dir() or not os.access(parent, os.W_OK) or (path.exists() and not os.access(path, os.W_OK)):
            raise _Abort(EXIT_UNWRITABLE, f"cannot write {path}")


def _write(writer, *args) -> None:
    try:
        writer(*args)
    except OSError as exc:
        raise _Abort(EXIT_UNWRITABLE, f"cannot write {args[-1]}: {exc.strerror}") from None


def _rho0(config: RunConfig) -> float:
    if config.rho0 is None:
        raise _Abort(EXIT_CONFIG, "solve.rho0 is required")
    return config.rho0


def _solve(config: RunConfig) -> ProfileSolution:
    rho0 = _rho0(config)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", HypothesisWarning)
        try:
            sol = solve_profile(config.warping, config.elliptic, rho0, config.options)
        except SOLVER_ERRORS as exc:
            raise _Abort(EXIT_SOLVER, f"solver error: {type(exc).__name__}: {exc}") from None
    for w in caught:
        if issubclass(w.category, HypothesisWarning):
            print(f"ewmt: warning: {w.message}", file=sys.stderr)
    return sol


def _summary(sol: ProfileSolution) -> dict:
    return {
        "rho0": sol.rho0,
        "warping": sol.warping.describe(),
        "elliptic": sol.elliptic.describe(),
        "classification": sol.classification,
        "t0_estimate": sol.t0_estimate,
        "t0_error_bound": sol.t0_error,
        "termination": sol.termination,
        "n_samples": len(sol),
        "hypothesis_satisfied": sol.metadata["h_rho_rho0_product"] >= 1.0,
        **sol.metadata,
    }


def run_solve(config: RunConfig) -> int:
    _require_writable(config.csv_path, config.report_path)
    sol = _solve(config)
    _write(write_profile_csv, sol, config.csv_path)
    _write(write_report, {"command": "solve", **_summary(sol)}, config.report_path)
    print(f"{sol.classification}: t0 = {sol.t0_estimate:.10g} (+- {sol.t0_error:.2g}); wrote {config.csv_path}")
    return EXIT_OK


def run_verify(config: RunConfig, csv_path: Path | None = None) -> int:
    _require_writable(config.report_path)
    if csv_path is not None:
        try:
            sol = read_profile_csv(csv_path, config.warping, config.elliptic, config.options)
        except (OSError, ValueError) as exc:
            raise _Abort(EXIT_CONFIG, f"cannot read profile {csv_path}: {exc}") from None
        summary = {"source": str(csv_path), "rho0": sol.rho0, "n_samples": len(sol)}
    else:
        sol = _solve(config)
        summary = _summary(sol)
    try:
        report = verify_invariants(sol)
    except ValueError as exc:
        raise _Abort(EXIT_SOLVER, f"cannot verify: {exc}") from None
    _write(write_report, {"command": "verify", **summary, "invariants": report.to_dict()}, config.report_path)
    for check in report.checks:
        status = "skip" if check.skipped else ("pass" if check.passed else "FAIL")
        print(f"{status:4}  {check.check_name:32} worst={check.worst_residual:.3e}  {check.note}".rstrip())
    return EXIT_OK if report.overall else EXIT_CHECK_FAILED


def sweep_row(job: tuple) -> dict:
    """One sweep entry; errors are recorded in the row rather than raised."""
    W, F, opts, rho0 = job
    row = {"rho0": rho0, "t0": math.nan, "classification": "error"}
    row["h_rho_rho0_product"] = eut_products(W, rho0)["h_rho_rho0_product"]
    notes = []
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", HypothesisWarning)
        try:
            sol = solve_profile(W, F, rho0, opts)
            row["t0"] = sol.t0_estimate
            row["classification"] = sol.classification
        except SOLVER_ERRORS as exc:
            notes.append(type(exc).__name__)
    if any(issubclass(w.category, HypothesisWarning) for w in caught):
        notes.insert(0, "hypothesis_warning")
    row["note"] = ";".join(notes)
    return row


def run_sweep(config: RunConfig) -> int:
    if not config.rho0_list:
        raise _Abort(EXIT_CONFIG, "sweep.rho0_list must be a non-empty list")
    _require_writable(config.csv_path)
    jobs = [(config.warping, config.elliptic, config.options, r) for r in config.rho0_list]
    if config.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=min(config.workers, len(jobs))) as pool:
            rows = list(pool.map(sweep_row, jobs))
    else:
        rows = [sweep_row(job) for job in jobs]
    _write(write_sweep_csv, rows, config.csv_path)
    ok = sum(row["classification"] != "error" for row in rows)
    print(f"{ok}/{len(rows)} rows solved; wrote {config.csv_path}")
    return EXIT_OK if ok else EXIT_SOLVER


def emit_plot(sol: ProfileSolution, svg_path: Path) -> int:
    _require_writable(svg_path)
    _write(write_svg, sol, svg_path)
    return EXIT_OK


def run_plot(config: RunConfig) -> int:
    _require_writable(config.svg_path)
    code = emit_plot(_solve(config), config.svg_path)
    print(f"wrote {config.svg_path}")
    return code


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ewmt",
        description="Rotational elliptic Weingarten minimal-type surfaces in warped products.",
        epilog=f"Relative output paths are placed under ${OUTPUT_DIR_ENV} when it is set.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("solve", "integrate the profile and write CSV and report"),
        ("verify", "run the invariant checks and write the report"),
        ("sweep", "tabulate t0 over sweep.rho0_list"),
        ("plot", "write an SVG plot of rho(t)"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("config", type=Path)
        if name == "verify":
            p.add_argument("--csv", type=Path, help="verify a previously written profile CSV instead of solving")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        config = load_config(args.config)
        if args.command == "solve":
            return run_solve(config)
        if args.command == "verify":
            return run_verify(config, args.csv)
        if args.command == "sweep":
            return run_sweep(config)
        return run_plot(config)
    except ConfigError as exc:
        _error(str(exc))
        return EXIT_CONFIG
    except _Abort as exc:
        _error(str(exc))
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
