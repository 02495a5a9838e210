"""Principal curvatures of rotational surfaces in the warped product.

Two parametrizations of the generating curve are supported:

* graph form ``rho = rho(t)``, state ``(t, rho, rho_t)``;
* arc-length form ``(rho(s), t(s))`` with ``exp(2h) t_s^2 + rho_s^2 = 1``.

The unit normal is ``N = (-exp(h) t_s, 0, exp(-h) rho_s)``. With ``t_s > 0``
it points towards the axis and gives ``kappa2 = exp(h) t_s / rho > 0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from .errors import DegenerateState
from .geometry import TangentVector, WarpingFunction
from .weingarten import EllipticFunction


class GraphState(NamedTuple):
    t: float
    rho: float
    rho_t: float


class ArcState(NamedTuple):
    s: float
    rho: float
    rho_s: float
    t: float
    t_s: float


@dataclass(frozen=True)
class CurvaturePair:
    kappa1: float
    kappa2: float

    @property
    def H(self) -> float:
        return 0.5 * (self.kappa1 + self.kappa2)

    @property
    def K(self) -> float:
        return self.kappa1 * self.kappa2

    @property
    def half_difference(self) -> float:
        """(kappa1 - kappa2)/2, whose square is H^2 - K."""
        return 0.5 * (self.kappa1 - self.kappa2)


class Residual(NamedTuple):
    """Weingarten residual, its slope in the unknown, and the ellipticity factor."""

    value: float
    slope: float
    ellipticity: float
    scale: float


def weingarten_residual(F: EllipticFunction, pair: CurvaturePair) -> float:
    """H - f(H^2 - K)."""
    beta = pair.half_difference
    return pair.H - F(beta * beta)


def _ellipticity_factor(F: EllipticFunction, beta: float) -> float:
    return 1.0 - 2.0 * beta * F.derivative(beta * beta)


# -- graph form ---------------------------------------------------------------


def graph_curvatures(W: WarpingFunction, g: GraphState, rho_tt: float) -> CurvaturePair:
    if not g.rho > 0:
        raise ValueError("graph state needs rho > 0")
    h = W.h(g.rho)
    hr = W.h_rho(g.rho)
    eh = math.exp(h)
    e2h = eh * eh
    D = e2h + g.rho_t * g.rho_t
    sqrtD = math.sqrt(D)
    kappa1 = eh * (e2h * hr + 2.0 * hr * g.rho_t**2 - rho_tt) / (D * sqrtD)
    kappa2 = eh / (g.rho * sqrtD)
    return CurvaturePair(kappa1, kappa2)


def graph_residual(
    W: WarpingFunction, F: EllipticFunction, g: GraphState, rho_tt: float
) -> float:
    """Left minus right side of the graph-form equation; decreasing in rho_tt."""
    return weingarten_residual(F, graph_curvatures(W, g, rho_tt))


def graph_residual_full(
    W: WarpingFunction, F: EllipticFunction, g: GraphState, rho_tt: float
) -> Residual:
    pair = graph_curvatures(W, g, rho_tt)
    beta = pair.half_difference
    factor = _ellipticity_factor(F, beta)
    eh = math.exp(W.h(g.rho))
    D = eh * eh + g.rho_t * g.rho_t
    dkappa1 = -eh / (D * math.sqrt(D))
    # dR/drho_tt = (1/2) dkappa1 * (1 - 2 beta f'(beta^2))
    slope = 0.5 * dkappa1 * factor
    value = pair.H - F(beta * beta)
    return Residual(value, slope, factor, abs(pair.kappa1) + abs(pair.kappa2))


def minimal_graph_rho_tt(W: WarpingFunction, g: GraphState) -> float:
    """Closed-form rho_tt for f = 0 (kappa1 = -kappa2)."""
    e2h = math.exp(2.0 * W.h(g.rho))
    hr = W.h_rho(g.rho)
    D = e2h + g.rho_t * g.rho_t
    return hr * (e2h + 2.0 * g.rho_t**2) + D / g.rho


# -- arc-length form ----------------------------------------------------------


def unit_speed_defect(W: WarpingFunction, a: ArcState) -> float:
    """exp(2h) t_s^2 + rho_s^2 - 1."""
    return math.exp(2.0 * W.h(a.rho)) * a.t_s**2 + a.rho_s**2 - 1.0


def arc_curvatures(W: WarpingFunction, a: ArcState, rho_ss: float) -> CurvaturePair:
    """Curvatures from rho_ss, valid whenever t_s != 0."""
    if a.t_s == 0.0:
        raise DegenerateState("kappa1 in terms of rho_ss needs t_s != 0")
    eh = math.exp(W.h(a.rho))
    hr = W.h_rho(a.rho)
    kappa1 = (eh * eh * hr * a.t_s**2 - rho_ss) / (eh * a.t_s)
    kappa2 = eh * a.t_s / a.rho
    return CurvaturePair(kappa1, kappa2)


def t_ss_from_constraint(W: WarpingFunction, a: ArcState, rho_ss: float) -> float:
    """t_ss from the derivative of the unit-speed constraint."""
    if a.t_s == 0.0:
        raise DegenerateState("recovering t_ss needs t_s != 0")
    e2h = math.exp(2.0 * W.h(a.rho))
    hr = W.h_rho(a.rho)
    return -hr * a.t_s * a.rho_s - a.rho_s * rho_ss / (e2h * a.t_s)


def rho_ss_from_constraint(W: WarpingFunction, a: ArcState, t_ss: float) -> float:
    """rho_ss from the derivative of the unit-speed constraint (needs rho_s != 0)."""
    if a.rho_s == 0.0:
        raise DegenerateState("recovering rho_ss needs rho_s != 0")
    e2h = math.exp(2.0 * W.h(a.rho))
    hr = W.h_rho(a.rho)
    return -e2h * a.t_s * (t_ss + hr * a.t_s * a.rho_s) / a.rho_s


def arc_curvatures_from_t_ss(W: WarpingFunction, a: ArcState, t_ss: float) -> CurvaturePair:
    """Curvatures from t_ss, valid whenever rho_s != 0."""
    if a.rho_s == 0.0:
        raise DegenerateState("kappa1 in terms of t_ss needs rho_s != 0")
    eh = math.exp(W.h(a.rho))
    hr = W.h_rho(a.rho)
    kappa1 = eh * (t_ss / a.rho_s + 2.0 * hr * a.t_s)
    kappa2 = eh * a.t_s / a.rho
    return CurvaturePair(kappa1, kappa2)


def arc_residual(
    W: WarpingFunction, F: EllipticFunction, a: ArcState, rho_ss: float
) -> Residual:
    """Weingarten residual with rho_ss as the unknown (slope has the sign of -t_s)."""
    pair = arc_curvatures(W, a, rho_ss)
    beta = pair.half_difference
    factor = _ellipticity_factor(F, beta)
    eh = math.exp(W.h(a.rho))
    slope = -0.5 * factor / (eh * a.t_s)
    value = pair.H - F(beta * beta)
    return Residual(value, slope, factor, abs(pair.kappa1) + abs(pair.kappa2))


def arc_residual_Q(
    W: WarpingFunction, F: EllipticFunction, u: float, v: float, z: float, w: float
) -> tuple[float, float]:
    """Q(rho, rho_s, t_s, t_ss) and dQ/dt_ss; the sign of dQ/dw is the sign of v."""
    if not u > 0:
        raise ValueError("Q needs u = rho > 0")
    if v == 0.0:
        raise DegenerateState("Q needs v = rho_s != 0")
    h = W.h(u)
    hr = W.h_rho(u)
    eh = math.exp(h)
    beta = eh * ((w + 2.0 * hr * v * z) * u - z * v) / (2.0 * u * v)
    Q = 0.5 * eh * (w / v + z / u + 2.0 * hr * z) - F(beta * beta)
    dQ = eh / (2.0 * v) * _ellipticity_factor(F, beta)
    return Q, dQ


def unit_normal(W: WarpingFunction, a: ArcState) -> TangentVector:
    h = W.h(a.rho)
    return TangentVector(-math.exp(h) * a.t_s, 0.0, math.exp(-h) * a.rho_s)
