"""Elliptic functions f for the relation H = f(H^2 - K)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError

ELLIPTIC_FAMILIES = ("zero", "sqrt_scaled", "custom_polynomial")

DIVERGENCE_THRESHOLD = 1e6


@dataclass(frozen=True)
class EllipticFunction:
    """Minimal-type elliptic function on (-epsilon, inf).

    ``sqrt_scaled`` is ``f(t) = alpha*sqrt(t)`` for t >= 0 and 0 for t < 0.
    Its derivative is evaluated as ``alpha / (2 sqrt(max(t, eval_floor)))``
    for t > 0 and as 0 for t <= 0, which keeps f continuous and
    4 t f'(t)^2 <= alpha^2. Along catenoidal tails H^2 - K decays far below
    any fixed floor, so the default floor is 0.
    ``custom_polynomial`` is ``f(t) = sum_{i>=1} c_i t^i`` with
    ``coefficients = (c_1, ..., c_n)``, so f(0) = 0 by construction.
    """

    family: str = "zero"
    alpha: float = 0.0
    epsilon: float = 1e-3
    eval_floor: float = 0.0
    coefficients: tuple[float, ...] = ()

    def __post_init__(self):
        if self.family not in ELLIPTIC_FAMILIES:
            raise ValueError(f"unknown elliptic family {self.family!r}")
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        if not self.eval_floor >= 0:
            raise ValueError("eval_floor must be non-negative")
        object.__setattr__(self, "coefficients", tuple(float(c) for c in self.coefficients))
        if self.family == "custom_polynomial" and not self.coefficients:
            raise ValueError("custom_polynomial needs at least one coefficient")

    @classmethod
    def zero(cls) -> "EllipticFunction":
        return cls("zero")

    @classmethod
    def sqrt_scaled(cls, alpha: float, **kwargs) -> "EllipticFunction":
        return cls("sqrt_scaled", alpha=alpha, **kwargs)

    @classmethod
    def polynomial(cls, coefficients: Sequence[float], **kwargs) -> "EllipticFunction":
        return cls("custom_polynomial", coefficients=tuple(coefficients), **kwargs)

    def _check(self, t: float) -> None:
        if not t > -self.epsilon:
            raise DomainError(f"f evaluated at t={t!r}, outside (-{self.epsilon}, inf)")

    def __call__(self, t: float) -> float:
        self._check(t)
        if self.family == "zero":
            return 0.0
        if self.family == "sqrt_scaled":
            return self.alpha * math.sqrt(t) if t > 0 else 0.0
        acc = 0.0
        for c in reversed(self.coefficients):
            acc = (acc + c) * t
        return acc

    def derivative(self, t: float) -> float:
        self._check(t)
        if self.family == "zero":
            return 0.0
        if self.family == "sqrt_scaled":
            if t <= 0:
                return 0.0
            return self.alpha / (2.0 * math.sqrt(max(t, self.eval_floor))) if self.alpha else 0.0
        acc = 0.0
        for i in range(len(self.coefficients), 0, -1):
            acc = acc * t + i * self.coefficients[i - 1]
        return acc

    def describe(self) -> str:
        if self.family == "sqrt_scaled":
            return f"sqrt_scaled(alpha={self.alpha:g})"
        if self.family == "custom_polynomial":
            return f"custom_polynomial({', '.join(f'{c:g}' for c in self.coefficients)})"
        return "zero"


def f_eval(F: EllipticFunction, t: float) -> float:
    return F(t)


def f_prime(F: EllipticFunction, t: float) -> float:
    return F.derivative(t)


def ellipticity_grid(F: EllipticFunction, t_max: float, n: int) -> np.ndarray:
    """Sampling grid: log-spaced on the positive side, linear on the negative side."""
    if n < 2 or not t_max > 0:
        raise ValueError("need n >= 2 and t_max > 0")
    t_lo = max(F.eval_floor, 1e-14)
    positive = np.geomspace(t_lo, t_max, n)
    negative = np.linspace(-F.epsilon + 1e-6, 0.0, n, endpoint=False)
    return np.concatenate([negative, positive])


def ellipticity_margin(F: EllipticFunction, t_max: float = 1e4, n: int = 200) -> float:
    """Largest sampled value of 4 t f'(t)^2. Elliptic functions stay below 1."""
    return float(max(4.0 * t * F.derivative(t) ** 2 for t in ellipticity_grid(F, t_max, n)))


def is_elliptic(F: EllipticFunction, t_max: float = 1e4, n: int = 200) -> bool:
    return F(0.0) == 0.0 and ellipticity_margin(F, t_max, n) < 1.0


def monotone_check(F: EllipticFunction, x_min: float, x_max: float, n: int) -> bool:
    """True iff x - f(x^2) and x + f(x^2) both increase strictly on the grid."""
    if n < 3:
        raise ValueError("need at least 3 grid points")
    xs = np.linspace(x_min, x_max, n)
    fx = np.array([F(x * x) for x in xs])
    g_minus = xs - fx
    g_plus = xs + fx
    f0 = F(0.0)
    if abs(f0) > 1e-12:
        return False
    return bool(np.all(np.diff(g_minus) > 0) and np.all(np.diff(g_plus) > 0))


def asymptotic_limits(F: EllipticFunction, r_probe: float = 10.0) -> tuple[float, float]:
    """Estimate l = lim_{r->-inf} and L = lim_{r->+inf} of r - f(r^2).

    The probe doubles ``r_probe`` twenty times in each direction. A sequence
    that moves monotonically past ``DIVERGENCE_THRESHOLD`` in magnitude is
    reported as an infinite limit; otherwise the last value is returned.
    """
    if not r_probe > 0:
        raise ValueError("r_probe must be positive")

    def probe(sign: float) -> float:
        values = []
        for k in range(21):
            r = sign * r_probe * 2.0**k
            values.append(r - F(r * r))
        steps = np.diff(values)
        monotone = np.all(steps > 0) if sign > 0 else np.all(steps < 0)
        last = values[-1]
        if monotone and abs(last) > DIVERGENCE_THRESHOLD:
            return math.copysign(math.inf, last)
        return last

    return probe(-1.0), probe(1.0)
