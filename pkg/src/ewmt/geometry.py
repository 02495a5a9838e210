"""Warped product R^2 x_h R in coordinates (rho, omega, t).

The metric is ``d rho^2 + rho^2 d omega^2 + exp(2 h(rho)) dt^2``. Frame
indices follow the coordinate order: 0 = rho, 1 = omega, 2 = t.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import AxisSingularity

RHO, OMEGA, T = 0, 1, 2

_FIELD_INDEX = {"d_rho": RHO, "d_omega": OMEGA, "d_t": T}

WARPING_FAMILIES = ("constant", "linear", "affine", "polynomial")


@dataclass(frozen=True)
class WarpingFunction:
    """Radial warping function h(rho) and its derivative.

    ``coefficients`` depend on ``family``:

    * constant: ``(c,)`` with h = c
    * linear: ``(a,)`` with h = a*rho
    * affine: ``(a, b)`` with h = a*rho + b
    * polynomial: ``(c0, c1, ..., cn)`` with h = sum c_i rho^i
    """

    family: str
    coefficients: tuple[float, ...]

    def __post_init__(self):
        if self.family not in WARPING_FAMILIES:
            raise ValueError(f"unknown warping family {self.family!r}")
        coeffs = tuple(float(c) for c in self.coefficients)
        expected = {"constant": 1, "linear": 1, "affine": 2}.get(self.family)
        if expected is not None and len(coeffs) != expected:
            raise ValueError(
                f"{self.family} warping takes {expected} coefficient(s), got {len(coeffs)}"
            )
        if not coeffs:
            raise ValueError("polynomial warping needs at least one coefficient")
        if not all(math.isfinite(c) for c in coeffs):
            raise ValueError("warping coefficients must be finite")
        object.__setattr__(self, "coefficients", coeffs)
        object.__setattr__(self, "_poly", self._as_polynomial(coeffs))

    def _as_polynomial(self, coeffs):
        # ascending coefficients of h as a polynomial in rho
        if self.family == "constant":
            return coeffs
        if self.family == "linear":
            return (0.0, coeffs[0])
        if self.family == "affine":
            return (coeffs[1], coeffs[0])
        return coeffs

    @classmethod
    def constant(cls, c: float = 0.0) -> "WarpingFunction":
        return cls("constant", (c,))

    @classmethod
    def linear(cls, a: float = 1.0) -> "WarpingFunction":
        return cls("linear", (a,))

    @classmethod
    def affine(cls, a: float, b: float) -> "WarpingFunction":
        return cls("affine", (a, b))

    @classmethod
    def polynomial(cls, coefficients: Sequence[float]) -> "WarpingFunction":
        return cls("polynomial", tuple(coefficients))

    def h(self, rho):
        """Evaluate h. Works on floats and numpy arrays."""
        acc = 0.0 * rho
        for c in reversed(self._poly):
            acc = acc * rho + c
        return acc

    def h_rho(self, rho):
        """Evaluate dh/drho. Works on floats and numpy arrays."""
        acc = 0.0 * rho
        for i in range(len(self._poly) - 1, 0, -1):
            acc = acc * rho + i * self._poly[i]
        return acc

    def describe(self) -> str:
        return f"{self.family}({', '.join(f'{c:g}' for c in self.coefficients)})"


class Point(NamedTuple):
    rho: float
    omega: float
    t: float


class TangentVector(NamedTuple):
    """Components on the coordinate frame d_rho, d_omega, d_t."""

    a1: float
    a2: float
    a3: float


def same_point(p: Point, q: Point, tol: float = 1e-12) -> bool:
    """Compare two points with omega taken modulo 2*pi."""
    d_omega = (p.omega - q.omega + math.pi) % (2.0 * math.pi) - math.pi
    return abs(p.rho - q.rho) <= tol and abs(d_omega) <= tol and abs(p.t - q.t) <= tol


def metric_diagonal(W: WarpingFunction, p: Point) -> np.ndarray:
    return np.array([1.0, p.rho**2, math.exp(2.0 * W.h(p.rho))])


def metric_eval(W: WarpingFunction, p: Point, u: Sequence[float], v: Sequence[float]) -> float:
    """Inner product g(u, v) at ``p``."""
    if p.rho < 0:
        raise ValueError("rho must be non-negative")
    return (
        u[0] * v[0]
        + p.rho**2 * u[1] * v[1]
        + math.exp(2.0 * W.h(p.rho)) * u[2] * v[2]
    )


def christoffel(W: WarpingFunction, p: Point) -> np.ndarray:
    """Connection table ``gamma[i, j, k]``: the X_k component of nabla_{X_i} X_j."""
    if p.rho <= 0:
        raise AxisSingularity(f"connection is singular on the axis (rho={p.rho})")
    hr = W.h_rho(p.rho)
    e2h = math.exp(2.0 * W.h(p.rho))
    gamma = np.zeros((3, 3, 3))
    gamma[OMEGA, RHO, OMEGA] = 1.0 / p.rho
    gamma[RHO, OMEGA, OMEGA] = 1.0 / p.rho
    gamma[OMEGA, OMEGA, RHO] = -p.rho
    gamma[T, RHO, T] = hr
    gamma[RHO, T, T] = hr
    gamma[T, T, RHO] = -e2h * hr
    return gamma


def covariant_derivative(
    W: WarpingFunction, p: Point, Y: Sequence[float], field: int
) -> np.ndarray:
    """nabla_Y X for X the coordinate field with index ``field``."""
    gamma = christoffel(W, p)
    return np.asarray(Y, dtype=float) @ gamma[:, field, :]


def killing_residual(
    W: WarpingFunction, field: str, p: Point, Y: Sequence[float], Z: Sequence[float]
) -> float:
    """g(nabla_Y X, Z) + g(nabla_Z X, Y); zero iff X is Killing (for all Y, Z)."""
    try:
        index = _FIELD_INDEX[field]
    except KeyError:
        raise ValueError(f"field must be one of {sorted(_FIELD_INDEX)}") from None
    nY = covariant_derivative(W, p, Y, index)
    nZ = covariant_derivative(W, p, Z, index)
    return metric_eval(W, p, nY, Z) + metric_eval(W, p, nZ, Y)
