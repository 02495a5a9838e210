"""Run configuration files.

Grammar (one entry per line)::

    # comment
    section.name = value

Blank lines and ``#`` comments are ignored; a ``#`` after a value also
starts a comment. Keys are fixed (see ``SCHEMA``) and each has a type:
``float``, ``int``, ``str``, ``path`` or ``floats`` (comma-separated).
Repeated keys are an error.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from pathlib import Path

from .errors import ConfigError
from .geometry import WARPING_FAMILIES, WarpingFunction
from .profile import SolverOptions
from .weingarten import ELLIPTIC_FAMILIES, EllipticFunction, ellipticity_margin

OUTPUT_DIR_ENV = "EWMT_OUTPUT_DIR"

SCHEMA = {
    "warping.family": "str",
    "warping.coefficients": "floats",
    "weingarten.family": "str",
    "weingarten.alpha": "float",
    "weingarten.epsilon": "float",
    "weingarten.eval_floor": "float",
    "weingarten.coefficients": "floats",
    "solve.rho0": "float",
    "solve.s_max": "float",
    "solve.rel_tol": "float",
    "solve.abs_tol": "float",
    "solve.newton_tol": "float",
    "solve.max_step": "float",
    "output.csv_path": "path",
    "output.report_path": "path",
    "output.svg_path": "path",
    "sweep.rho0_list": "floats",
    "sweep.workers": "int",
}

DEFAULT_COEFFICIENTS = {"constant": (0.0,), "linear": (1.0,)}


@dataclass(frozen=True)
class RunConfig:
    warping: WarpingFunction
    elliptic: EllipticFunction
    rho0: float | None
    options: SolverOptions
    csv_path: Path
    report_path: Path
    svg_path: Path
    rho0_list: tuple[float, ...] = ()
    workers: int = 1


def _convert(key: str, kind: str, raw: str, lineno: int):
    try:
        if kind == "float":
            value = float(raw)
            if not math.isfinite(value):
                raise ValueError
            return value
        if kind == "int":
            return int(raw)
        if kind == "floats":
            items = [item.strip() for item in raw.split(",") if item.strip()]
            values = tuple(float(item) for item in items)
            if not all(math.isfinite(v) for v in values):
                raise ValueError
            return values
    except ValueError:
        raise ConfigError(f"line {lineno}: {key} expects {kind}, got {raw!r}") from None
    if not raw:
        raise ConfigError(f"line {lineno}: {key} is empty")
    return raw


def parse_entries(text: str) -> dict:
    entries = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, raw = (part.strip() for part in line.split("=", 1))
        if key not in SCHEMA:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in entries:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        entries[key] = _convert(key, SCHEMA[key], raw, lineno)
    return entries


def resolve_output(path: str | Path) -> Path:
    """Relative output paths land in $EWMT_OUTPUT_DIR when it is set."""
    path = Path(path)
    override = os.environ.get(OUTPUT_DIR_ENV)
    if override and not path.is_absolute():
        return Path(override) / path
    return path


def build_config(entries: dict) -> RunConfig:
    family = entries.get("warping.family")
    if family is None:
        raise ConfigError("warping.family is required")
    if family not in WARPING_FAMILIES:
        raise ConfigError(f"warping.family must be one of {', '.join(WARPING_FAMILIES)}")
    coeffs = entries.get("warping.coefficients", DEFAULT_COEFFICIENTS.get(family))
    if coeffs is None:
        raise ConfigError(f"warping.coefficients is required for {family} warping")
    try:
        warping = WarpingFunction(family, coeffs)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None

    efamily = entries.get("weingarten.family", "zero")
    if efamily not in ELLIPTIC_FAMILIES:
        raise ConfigError(f"weingarten.family must be one of {', '.join(ELLIPTIC_FAMILIES)}")
    ekwargs = {"family": efamily}
    for name in ("alpha", "epsilon", "eval_floor"):
        if f"weingarten.{name}" in entries:
            ekwargs[name] = entries[f"weingarten.{name}"]
    if "weingarten.coefficients" in entries:
        ekwargs["coefficients"] = entries["weingarten.coefficients"]
    if efamily == "sqrt_scaled" and "alpha" not in ekwargs:
        raise ConfigError("weingarten.alpha is required for sqrt_scaled")
    try:
        elliptic = EllipticFunction(**ekwargs)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    margin = ellipticity_margin(elliptic)
    if not margin < 1.0:
        raise ConfigError(f"f is not elliptic: sampled 4 t f'(t)^2 reaches {margin:.6g} (must stay below 1)")

    rho0 = entries.get("solve.rho0")
    if rho0 is not None and not rho0 > 0:
        raise ConfigError("rho0 must be positive")
    opt_kwargs = {
        name: entries[f"solve.{name}"]
        for name in ("s_max", "rel_tol", "abs_tol", "newton_tol", "max_step")
        if f"solve.{name}" in entries
    }
    try:
        options = SolverOptions(**opt_kwargs)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None

    rho0_list = entries.get("sweep.rho0_list", ())
    if any(not r > 0 for r in rho0_list):
        raise ConfigError("every sweep.rho0_list entry must be positive")
    workers = entries.get("sweep.workers", 1)
    if workers < 1:
        raise ConfigError("sweep.workers must be at least 1")

    return RunConfig(
        warping=warping,
        elliptic=elliptic,
        rho0=rho0,
        options=options,
        csv_path=resolve_output(entries.get("output.csv_path", "profile.csv")),
        report_path=resolve_output(entries.get("output.report_path", "report.json")),
        svg_path=resolve_output(entries.get("output.svg_path", "profile.svg")),
        rho0_list=rho0_list,
        workers=workers,
    )


def parse_config(text: str) -> RunConfig:
    return build_config(parse_entries(text))


def load_config(path: str | Path) -> RunConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    return parse_config(text)
