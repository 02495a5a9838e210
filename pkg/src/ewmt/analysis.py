"""Sample-level checks of the qualitative behaviour of computed profiles."""

from __future__ import annotations

import math
import sys
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.interpolate import CubicHermiteSpline

from .curvature import unit_speed_defect, weingarten_residual
from .errors import InsufficientTail
from .profile import ProfileSolution

K_TOL = 1e-12
RESIDUAL_TOL = 1e-9
SYMMETRY_TOL = 1e-7
MIN_TAIL = 10
# t_s must fall by at least a decade across the tail window to count as decaying
MIN_TAIL_DECAY = math.log(10.0)

CHECK_NAMES = (
    "rho_positive",
    "unit_speed",
    "weingarten_residual",
    "extrinsic_curvature_nonpositive",
    "height_derivative_positive",
    "height_strictly_monotone",
    "principal_curvature_signs",
    "rho_convexity",
    "waist_unique_minimum",
    "height_second_derivative_sign",
    "mirror_symmetry",
)


@dataclass
class CheckResult:
    check_name: str
    passed: bool
    worst_residual: float
    location_s: float
    skipped: bool = False
    note: str = ""


@dataclass
class InvariantReport:
    checks: list[CheckResult] = field(default_factory=list)
    warping_c: float = math.nan

    @property
    def overall(self) -> bool:
        return all(c.passed for c in self.checks)

    def __getitem__(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.check_name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "overall": self.overall,
            "warping_c": _json_float(self.warping_c),
            "checks": [
                {**asdict(c), "worst_residual": _json_float(c.worst_residual), "location_s": _json_float(c.location_s)}
                for c in self.checks
            ],
        }


def _json_float(x: float):
    if math.isfinite(x):
        return x
    return None if math.isnan(x) else ("inf" if x > 0 else "-inf")


def _worst(values: np.ndarray, s: np.ndarray, largest: bool) -> tuple[float, float]:
    i = int(np.argmax(values) if largest else np.argmin(values))
    return float(values[i]), float(s[i])


def _skip(name: str, reason: str) -> CheckResult:
    return CheckResult(name, True, math.nan, math.nan, skipped=True, note=reason)


def warping_lower_bound(sol: ProfileSolution) -> float:
    """min of h_rho over the rho-range the curve traverses."""
    grid = np.concatenate([np.linspace(sol.rho.min(), sol.rho.max(), 1001), sol.rho])
    return float(np.min(sol.warping.h_rho(grid)))


def verify_invariants(sol: ProfileSolution) -> InvariantReport:
    """Run every named check on ``sol`` and collect the results.

    Checks whose underlying result needs h_rho > 0 on the traversed range are reported
    as skipped when that fails; the convexity check only needs h_rho >= 0.
    """
    if len(sol) < 3:
        raise ValueError("need at least 3 samples")
    W, F = sol.warping, sol.elliptic
    s = sol.s
    c = warping_lower_bound(sol)
    report = InvariantReport(warping_c=c)
    add = report.checks.append

    v, loc = _worst(sol.rho, s, largest=False)
    add(CheckResult("rho_positive", v > 0, v, loc))

    states = sol.samples
    drift = np.array([abs(unit_speed_defect(W, a)) for a in states])
    v, loc = _worst(drift, s, largest=True)
    add(CheckResult("unit_speed", v <= sol.options.drift_tol, v, loc))

    pairs = sol.curvatures()
    k1 = np.array([p.kappa1 for p in pairs])
    k2 = np.array([p.kappa2 for p in pairs])
    rel = np.array([abs(weingarten_residual(F, p)) / (abs(p.kappa1) + abs(p.kappa2)) for p in pairs])
    v, loc = _worst(rel, s, largest=True)
    add(CheckResult("weingarten_residual", v <= RESIDUAL_TOL, v, loc))

    v, loc = _worst(k1 * k2, s, largest=True)
    add(CheckResult("extrinsic_curvature_nonpositive", v <= K_TOL, v, loc))

    v, loc = _worst(sol.t_s, s, largest=False)
    add(CheckResult("height_derivative_positive", v > 0, v, loc))

    add(_height_monotone(sol))

    if c > 0:
        margin = np.maximum(k1, -k2)
        v, loc = _worst(margin, s, largest=True)
        add(CheckResult("principal_curvature_signs", v < 0, v, loc))
    else:
        add(_skip("principal_curvature_signs", f"min h_rho = {c:.3g} is not positive"))

    if c >= 0:
        v, loc = _worst(sol.rho_ss, s, largest=False)
        add(CheckResult("rho_convexity", v > 0, v, loc))
    else:
        add(_skip("rho_convexity", f"min h_rho = {c:.3g} is negative"))

    if c > 0:
        add(_signed_about_waist("waist_unique_minimum", sol.rho_s, sol, positive_after=True))
        add(_signed_about_waist("height_second_derivative_sign", sol.t_ss(), sol, positive_after=False))
    else:
        add(_skip("waist_unique_minimum", f"min h_rho = {c:.3g} is not positive"))
        add(_skip("height_second_derivative_sign", f"min h_rho = {c:.3g} is not positive"))

    if sol.mirrored:
        r = symmetry_residual(sol)
        add(CheckResult("mirror_symmetry", r < SYMMETRY_TOL, r, sol.s0))
    else:
        add(_skip("mirror_symmetry", "solution has no s < s0 branch"))
    return report


def _height_monotone(sol: ProfileSolution) -> CheckResult:
    # Consecutive equal heights are tolerated only where the increment
    # predicted from t_s is below the floating-point resolution of t.
    dt = np.diff(sol.t)
    predicted = 0.5 * (sol.t_s[1:] + sol.t_s[:-1]) * np.diff(sol.s)
    resolution = 4.0 * sys.float_info.epsilon * np.maximum(np.abs(sol.t[1:]), np.abs(sol.t[:-1]))
    bad = (dt < 0) | ((dt == 0) & (predicted > resolution))
    margin = np.where(predicted > resolution, dt, np.abs(dt))
    if np.any(bad):
        i = int(np.argmax(bad))
        return CheckResult("height_strictly_monotone", False, float(dt[i]), float(sol.s[i + 1]))
    i = int(np.argmin(np.where(predicted > resolution, dt, np.inf)))
    return CheckResult("height_strictly_monotone", True, float(margin[i]), float(sol.s[i + 1]))


def _signed_about_waist(name: str, values: np.ndarray, sol: ProfileSolution, positive_after: bool) -> CheckResult:
    """values < 0 on one side of the waist, > 0 on the other, zero at the waist."""
    side = np.sign(sol.s - sol.s0)
    if not positive_after:
        side = -side
    # signed margin: positive where the sign is right
    margin = np.where(side != 0, side * values, np.inf)
    off = margin[side != 0]
    scale = float(np.max(np.abs(values))) or 1.0
    at_waist = np.abs(values[side == 0])
    waist_ok = bool(np.all(at_waist <= 1e-12 * scale))
    if off.size == 0:
        return CheckResult(name, waist_ok, 0.0, sol.s0)
    i = int(np.argmin(margin))
    ok = bool(margin[i] > 0) and waist_ok
    return CheckResult(name, ok, float(margin[i]), float(sol.s[i]))


def symmetry_residual(full_sol: ProfileSolution) -> float:
    """Largest mismatch between the curve and its reflection about the waist."""
    s0 = full_sol.s0
    pos = full_sol.s >= s0
    neg = full_sol.s <= s0
    s_pos, s_neg = full_sol.s[pos], full_sol.s[neg]
    if s_neg.size < 2 or s_pos.size < 2:
        raise ValueError("symmetry needs samples on both sides of the waist")
    t_waist = float(np.interp(s0, full_sol.s, full_sol.t))
    d = s_pos - s0
    d = d[d <= s0 - s_neg[0]]
    probe = s0 - d
    rho_n, t_n = full_sol.rho[neg], full_sol.t[neg]
    idx = np.searchsorted(s_neg, probe)
    idx = np.clip(idx, 0, s_neg.size - 1)
    exact = s_neg[idx] == probe
    if np.all(exact):
        rho_m, t_m = rho_n[idx], t_n[idx]
    else:
        rho_m = CubicHermiteSpline(s_neg, rho_n, full_sol.rho_s[neg])(probe)
        t_m = CubicHermiteSpline(s_neg, t_n, full_sol.t_s[neg])(probe)
    rho_p = full_sol.rho[pos][: d.size]
    t_p = full_sol.t[pos][: d.size]
    return float(max(np.max(np.abs(rho_p - rho_m)), np.max(np.abs(t_p + t_m - 2.0 * t_waist))))


def check_symmetry(full_sol: ProfileSolution, tol: float = SYMMETRY_TOL) -> bool:
    return symmetry_residual(full_sol) < tol


def estimate_height_asymptote(sol: ProfileSolution) -> tuple[float, float]:
    """Asymptotic height t0 and a bound on the neglected tail.

    Fits ``log t_s = log a + m s`` by least squares on the last quarter of
    the s >= s0 samples. With exponential decay (m < 0, and at least a
    decade of decay across the window) the tail beyond the last sample is
    bounded by ``(a/|m|) exp(m s_end)``, which is added to t(s_end) and
    returned as the error bound (plus a few ulps of t). Otherwise t is taken
    to grow without bound and ``(inf, inf)`` is returned.
    """
    branch = sol.positive_branch() if sol.mirrored else sol
    n_tail = len(branch) // 4
    if n_tail < MIN_TAIL:
        raise InsufficientTail(f"{n_tail} tail samples, need at least {MIN_TAIL}")
    s = branch.s[-n_tail:]
    ts = branch.t_s[-n_tail:]
    if np.any(ts <= 0):
        return math.inf, math.inf
    m, log_a = np.polyfit(s, np.log(ts), 1)
    if m >= 0 or -m * (s[-1] - s[0]) < MIN_TAIL_DECAY:
        return math.inf, math.inf
    s_end = float(branch.s[-1])
    t_end = float(branch.t[-1])
    tail = math.exp(log_a + m * s_end) / -m
    floor = 8.0 * sys.float_info.epsilon * max(1.0, abs(t_end))
    return t_end + tail, tail + floor


def check_radius_divergence(sol: ProfileSolution) -> bool:
    """Evidence that rho grows without bound along s > s0."""
    branch = sol.positive_branch() if sol.mirrored else sol
    if len(branch) < 2:
        return False
    s_end = float(branch.s[-1])
    s_half = branch.s0 + 0.5 * (s_end - branch.s0)
    slope_half = float(np.interp(s_half, branch.s, branch.rho_s))
    return bool(branch.rho[-1] > 10.0 * branch.rho0 and branch.rho_s[-1] >= slope_half)
