"""Shooting integrators for the rotational EWMT generating curve.

The equation is implicit in its highest derivative. Every right-hand-side
evaluation closes that derivative with a scalar Newton solve; the outer
integration is the adaptive Dormand-Prince pair from :mod:`ewmt.stepper`.
"""

from __future__ import annotations

import math
import sys
import warnings
from dataclasses import dataclass, replace
from typing import Callable, NamedTuple

import numpy as np

from .analysis import check_radius_divergence, estimate_height_asymptote
from .curvature import (
    ArcState,
    GraphState,
    Residual,
    arc_residual,
    arc_residual_Q,
    graph_residual_full,
    minimal_graph_rho_tt,
    t_ss_from_constraint,
)
from .errors import AxisContact, EllipticityViolation, InsufficientTail, NewtonDivergence
from .geometry import WarpingFunction
from .profile import ProfileSolution, SolverOptions
from .stepper import dopri45
from .weingarten import EllipticFunction

VERTICAL_SLOPE = 1.0 / math.sqrt(sys.float_info.epsilon)
# exp(2h) overflows a double a little above 709; stage evaluations beyond
# MAX_TWO_H are rejected, and integration stops once an accepted step passes
# STOP_TWO_H so the stepper is never cornered against the guard
MAX_TWO_H = 700.0
STOP_TWO_H = 650.0


class HypothesisWarning(UserWarning):
    """The waist radius does not satisfy h_rho(rho0) * rho0 >= 1."""


class NewtonResult(NamedTuple):
    value: float
    iterations: int


def newton_solve(
    residual: Callable[[float], Residual],
    guess: float,
    *,
    tol: float = 1e-12,
    max_iter: int = 25,
) -> NewtonResult:
    """Scalar Newton iteration on a residual with known slope.

    Convergence is declared when ``|R| <= tol * scale`` where ``scale`` is
    the curvature magnitude reported by the residual, so the test stays
    meaningful when curvatures decay to tiny values along the tail.
    """
    w = guess
    for iteration in range(max_iter + 1):
        r = residual(w)
        if not r.ellipticity > 0:
            raise EllipticityViolation(
                f"1 - 2 beta f'(beta^2) = {r.ellipticity!r} is not positive at w={w!r}"
            )
        if abs(r.value) <= tol * r.scale or r.value == 0.0:
            return NewtonResult(w, iteration)
        if iteration == max_iter or r.slope == 0.0:
            break
        w = w - r.value / r.slope
        if not math.isfinite(w):
            break
    raise NewtonDivergence(f"Newton did not converge in {max_iter} iterations (last w={w!r})")


def newton_highest_derivative(
    W: WarpingFunction,
    F: EllipticFunction,
    u: float,
    v: float,
    z: float,
    w_guess: float,
    opts: SolverOptions = SolverOptions(),
) -> float:
    """Solve Q(u, v, z, w) = 0 for w = t_ss given rho, rho_s != 0 and t_s."""

    def residual(w: float) -> Residual:
        q, dq = arc_residual_Q(W, F, u, v, z, w)
        eh = math.exp(W.h(u))
        scale = 0.5 * eh * (abs(w / v) + abs(z / u) + abs(2.0 * W.h_rho(u) * z))
        return Residual(q, dq, 2.0 * v * dq / eh, scale)

    return newton_solve(residual, w_guess, tol=opts.newton_tol, max_iter=opts.newton_max_iter).value


def close_graph(
    W: WarpingFunction,
    F: EllipticFunction,
    g: GraphState,
    guess: float | None = None,
    opts: SolverOptions = SolverOptions(),
) -> NewtonResult:
    """rho_tt solving the graph-form equation at state ``g``."""
    if guess is None:
        guess = minimal_graph_rho_tt(W, g)
    return newton_solve(
        lambda w: graph_residual_full(W, F, g, w),
        guess,
        tol=opts.newton_tol,
        max_iter=opts.newton_max_iter,
    )


def minimal_arc_rho_ss(W: WarpingFunction, a: ArcState) -> float:
    """Closed-form rho_ss for f = 0 (kappa1 = -kappa2)."""
    e2h = math.exp(2.0 * W.h(a.rho))
    return e2h * a.t_s**2 * (W.h_rho(a.rho) + 1.0 / a.rho)


def close_arc(
    W: WarpingFunction,
    F: EllipticFunction,
    a: ArcState,
    guess: float | None = None,
    opts: SolverOptions = SolverOptions(),
) -> NewtonResult:
    """rho_ss solving the arc-length equation at state ``a`` (needs t_s != 0)."""
    if guess is None:
        guess = minimal_arc_rho_ss(W, a)
    return newton_solve(
        lambda w: arc_residual(W, F, a, w),
        guess,
        tol=opts.newton_tol,
        max_iter=opts.newton_max_iter,
    )


def eut_products(W: WarpingFunction, rho0: float) -> dict:
    """Both forms of the waist hypothesis, recorded side by side."""
    return {
        "h_rho_rho0_product": float(W.h_rho(rho0) * rho0),
        "h_rho0_product": float(W.h(rho0) * rho0),
    }


def _check_waist(W: WarpingFunction, rho0: float) -> dict:
    if not rho0 > 0:
        raise ValueError("rho0 must be positive")
    products = eut_products(W, rho0)
    if products["h_rho_rho0_product"] < 1.0:
        warnings.warn(
            f"h_rho(rho0)*rho0 = {products['h_rho_rho0_product']:.6g} < 1 at rho0={rho0:g}",
            HypothesisWarning,
            stacklevel=3,
        )
    return products


# -- graph form ---------------------------------------------------------------


@dataclass(frozen=True)
class GraphProfile:
    t: np.ndarray
    rho: np.ndarray
    rho_t: np.ndarray
    rho_tt: np.ndarray
    termination: str
    n_steps: int

    @property
    def samples(self) -> list[tuple[GraphState, float]]:
        return [
            (GraphState(t, r, rt), rtt)
            for t, r, rt, rtt in zip(self.t.tolist(), self.rho.tolist(), self.rho_t.tolist(), self.rho_tt.tolist())
        ]


def integrate_graph(
    W: WarpingFunction,
    F: EllipticFunction,
    rho0: float,
    t_span: tuple[float, float],
    opts: SolverOptions = SolverOptions(),
    *,
    fixed_step: float | None = None,
) -> GraphProfile:
    """Integrate rho(t) from the waist rho(t0) = rho0, rho_t(t0) = 0.

    Stops at the end of ``t_span``, when rho exceeds ``opts.rho_max``, when
    the slope passes ``1/sqrt(machine epsilon)`` (vertical tangent), or when
    exp(2h) approaches overflow.
    """
    _check_waist(W, rho0)
    t0, t1 = map(float, t_span)
    last = [None]

    def rhs(t: float, y: np.ndarray) -> np.ndarray:
        g = GraphState(t, float(y[0]), float(y[1]))
        if not g.rho > 0 or 2.0 * W.h(g.rho) > MAX_TWO_H:
            return np.array([math.nan, math.nan])
        rho_tt = close_graph(W, F, g, last[0], opts).value
        last[0] = rho_tt
        return np.array([g.rho_t, rho_tt])

    y0 = np.array([rho0, 0.0])
    rows = [(t0, rho0, 0.0, close_graph(W, F, GraphState(t0, rho0, 0.0), None, opts).value)]
    termination = "t_end"
    n_steps = 0
    for step in dopri45(
        rhs, t0, y0, t1,
        rel_tol=opts.rel_tol, abs_tol=opts.abs_tol, max_step=opts.max_step,
        fixed_step=fixed_step,
    ):
        n_steps += 1
        rho, rho_t = float(step.y[0]), float(step.y[1])
        rows.append((step.x, rho, rho_t, float(step.dydx[1])))
        if rho > opts.rho_max:
            termination = "rho_max"
            break
        if abs(rho_t) > VERTICAL_SLOPE:
            termination = "vertical_tangent"
            break
        if 2.0 * W.h(rho) > STOP_TWO_H:
            termination = "warp_overflow"
            break
    t, rho, rho_t, rho_tt = (np.array(col) for col in zip(*rows))
    return GraphProfile(t, rho, rho_t, rho_tt, termination, n_steps)


# -- arc-length form ----------------------------------------------------------


def _project_unit_speed(W: WarpingFunction, y: np.ndarray) -> np.ndarray:
    # scale (exp(h) t_s, rho_s) back onto the unit circle
    q = math.exp(W.h(y[0])) * y[3]
    norm = math.hypot(q, y[1])
    out = y.copy()
    out[1] /= norm
    out[3] /= norm
    return out


def integrate_arc(
    W: WarpingFunction,
    F: EllipticFunction,
    rho0: float,
    opts: SolverOptions = SolverOptions(),
    *,
    direction: float = 1.0,
) -> ProfileSolution:
    """Integrate (rho, rho_s, t, t_s) from the waist over s in [0, s_max].

    ``direction=-1`` integrates the s < 0 branch (reported with s <= 0 in
    ascending order); it exists to cross-check the reflection used by
    :func:`solve_profile`.
    """
    products = _check_waist(W, rho0)
    if direction not in (1.0, -1.0):
        raise ValueError("direction must be +1 or -1")
    last = [None]
    sign = direction

    def state_of(x: float, y: np.ndarray) -> ArcState:
        # x runs forward; the physical arc length is sign * x
        return ArcState(sign * x, float(y[0]), sign * float(y[1]), float(y[2]), float(y[3]))

    def rhs(x: float, y: np.ndarray) -> np.ndarray:
        a = state_of(x, y)
        if not a.rho > 0:
            return np.array([math.nan] * 4)
        if 2.0 * W.h(a.rho) > MAX_TWO_H:
            return np.array([math.nan] * 4)
        rho_ss = close_arc(W, F, a, last[0], opts).value
        last[0] = rho_ss
        t_ss = t_ss_from_constraint(W, a, rho_ss)
        # d/dx = sign * d/ds for rho_s and t; rho_ss is even, t_s' flips with t
        return np.array([a.rho_s * sign, rho_ss, a.t_s * sign, t_ss * sign])

    t_s0 = math.exp(-W.h(rho0))
    y0 = np.array([rho0, 0.0, 0.0, t_s0])
    waist = ArcState(0.0, rho0, 0.0, 0.0, t_s0)
    rows = [(0.0, rho0, 0.0, 0.0, t_s0, close_arc(W, F, waist, None, opts).value)]
    termination = "s_max"
    abs_tol = np.array([opts.abs_tol, opts.abs_tol, opts.abs_tol, 0.0])
    for step in dopri45(
        rhs, 0.0, y0, opts.s_max,
        rel_tol=opts.rel_tol, abs_tol=abs_tol, max_step=opts.max_step,
    ):
        y = step.y
        if not y[0] > 0:
            raise AxisContact(f"rho = {y[0]!r} at s = {sign * step.x!r}")
        defect = math.exp(2.0 * W.h(y[0])) * y[3] ** 2 + y[1] ** 2 - 1.0
        if abs(defect) > opts.drift_tol / 10.0:
            y = _project_unit_speed(W, y)
            step.y = y
        a = state_of(step.x, y)
        rho_ss = close_arc(W, F, a, last[0], opts).value
        rows.append((a.s, a.rho, a.rho_s, a.t, a.t_s, rho_ss))
        if a.rho > opts.rho_max:
            termination = "rho_max"
            break
        if 2.0 * W.h(a.rho) > STOP_TWO_H:
            termination = "warp_overflow"
            break
    if sign < 0:
        rows.reverse()
    s, rho, rho_s, t, t_s, rho_ss = (np.array(col) for col in zip(*rows))
    return ProfileSolution(
        s=s, rho=rho, rho_s=rho_s, t=t, t_s=t_s, rho_ss=rho_ss,
        rho0=float(rho0), warping=W, elliptic=F, options=opts,
        termination=termination, metadata=dict(products, n_steps=len(rows) - 1),
    )


def classify(diverging: bool, t0: float) -> str:
    if not diverging:
        return "truncated"
    return "catenoidal" if math.isfinite(t0) else "unbounded_height"


def solve_profile(
    W: WarpingFunction,
    F: EllipticFunction,
    rho0: float,
    opts: SolverOptions = SolverOptions(),
) -> ProfileSolution:
    """Waist-to-horizon integration, asymptote estimate, classification, mirror."""
    half = integrate_arc(W, F, rho0, opts)
    try:
        t0, err = estimate_height_asymptote(half)
    except InsufficientTail:
        t0, err = math.nan, math.nan
    diverging = check_radius_divergence(half)
    label = classify(diverging, t0) if not math.isnan(t0) else "truncated"
    return replace(half, t0_estimate=t0, t0_error=err, classification=label).mirror()
