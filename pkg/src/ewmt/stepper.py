"""Dormand-Prince 5(4) embedded Runge-Kutta stepper with step-size control.

The stepper is written as a generator so callers can inspect and project the
state after each accepted step, and stop on their own criteria.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterator

import numpy as np

from .errors import StepUnderflow

MIN_STEP = 1e-14

# Butcher tableau (Dormand & Prince 1980), 5th order solution propagated.
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = [
    np.array([]),
    np.array([1 / 5]),
    np.array([3 / 40, 9 / 40]),
    np.array([44 / 45, -56 / 15, 32 / 9]),
    np.array([19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729]),
    np.array([9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656]),
    np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84]),
]
_B = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_B_LOW = np.array(
    [5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40]
)
_E = _B - _B_LOW

_SAFETY = 0.9
_MIN_FACTOR = 0.2
_MAX_FACTOR = 5.0


@dataclass
class Step:
    x: float
    y: np.ndarray
    dydx: np.ndarray
    h_used: float


def _is_finite(a: np.ndarray) -> bool:
    return bool(np.all(np.isfinite(a)))


def dopri45(
    fun: Callable[[float, np.ndarray], np.ndarray],
    x0: float,
    y0: np.ndarray,
    x_end: float,
    *,
    rel_tol: float,
    abs_tol: np.ndarray | float,
    max_step: float,
    first_step: float | None = None,
    fixed_step: float | None = None,
) -> Iterator[Step]:
    """Yield accepted steps from ``x0`` towards ``x_end`` (forward only).

    ``abs_tol`` may be a per-component array; a zero entry gives pure
    relative control on that component. The caller may replace ``step.y``
    in place (e.g. a projection) before asking for the next step. With
    ``fixed_step`` set, error control is disabled.
    """
    x = float(x0)
    y = np.array(y0, dtype=float)
    atol = np.broadcast_to(np.asarray(abs_tol, dtype=float), y.shape)
    k0 = fun(x, y)
    if fixed_step is not None:
        h = fixed_step
    else:
        h = first_step if first_step is not None else min(1e-3, max_step)
    h = min(h, max_step)
    k = np.empty((7, y.size))
    while x < x_end:
        h = min(h, x_end - x)
        last = h >= x_end - x
        k[0] = k0
        try:
            with np.errstate(over="ignore", invalid="ignore"):
                for i in range(1, 7):
                    k[i] = fun(x + _C[i] * h, y + h * (_A[i] @ k[:i]))
                y_new = y + h * (_B @ k)
            finite = _is_finite(y_new) and _is_finite(k)
        except (OverflowError, FloatingPointError, ZeroDivisionError):
            finite = False
        if fixed_step is not None:
            if not finite:
                raise StepUnderflow(f"non-finite state with fixed step at x={x}")
            err = 0.0
        elif finite:
            scale = atol + rel_tol * np.maximum(np.abs(y), np.abs(y_new))
            with np.errstate(divide="ignore", invalid="ignore"):
                ratio = np.abs(h * (_E @ k)) / scale
            ratio[np.isnan(ratio)] = 0.0
            err = float(np.max(ratio))
        else:
            err = math.inf

        if err <= 1.0:
            x = x_end if last else x + h
            y = y_new
            k0 = k[6].copy()
            step = Step(x, y, k0, h)
            yield step
            if step.y is not y:
                # caller projected the state: refresh the derivative
                y = np.array(step.y, dtype=float)
                k0 = fun(x, y)
            if fixed_step is None:
                factor = _MAX_FACTOR if err == 0.0 else _SAFETY * err**-0.2
                h = min(max_step, h * min(_MAX_FACTOR, max(_MIN_FACTOR, factor)))
        else:
            factor = _MIN_FACTOR if not math.isfinite(err) else max(_MIN_FACTOR, _SAFETY * err**-0.2)
            h *= factor
            if h < MIN_STEP:
                raise StepUnderflow(f"step size {h:.3e} below {MIN_STEP:g} at x={x!r}")
