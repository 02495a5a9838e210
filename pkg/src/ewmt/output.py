"""Writers for profile CSV, JSON reports, sweep tables and SVG plots.

Everything here is byte-deterministic for identical input: no timestamps,
fixed float formats, sorted JSON keys.
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np

from .curvature import weingarten_residual
from .geometry import WarpingFunction
from .profile import ProfileSolution, SolverOptions
from .weingarten import EllipticFunction

CSV_COLUMNS = ("s", "rho", "rho_s", "t", "t_s", "kappa1", "kappa2", "H", "K", "residual")
SWEEP_COLUMNS = ("rho0", "t0", "classification", "h_rho_rho0_product", "note")
# 17 significant digits reproduce any double exactly
FLOAT_FMT = "%.17g"


def profile_table(sol: ProfileSolution) -> np.ndarray:
    pairs = sol.curvatures()
    k1 = np.array([p.kappa1 for p in pairs])
    k2 = np.array([p.kappa2 for p in pairs])
    res = np.array([weingarten_residual(sol.elliptic, p) for p in pairs])
    return np.column_stack([sol.s, sol.rho, sol.rho_s, sol.t, sol.t_s, k1, k2, 0.5 * (k1 + k2), k1 * k2, res])


def write_profile_csv(sol: ProfileSolution, path: str | Path) -> None:
    np.savetxt(path, profile_table(sol), fmt=FLOAT_FMT, delimiter=",", header=",".join(CSV_COLUMNS), comments="")


def read_profile_csv(
    path: str | Path,
    W: WarpingFunction,
    F: EllipticFunction,
    options: SolverOptions = SolverOptions(),
) -> ProfileSolution:
    """Rebuild a solution from a profile CSV.

    rho_ss is recovered from kappa1 through
    ``kappa1 exp(h) t_s = exp(2h) h_rho t_s^2 - rho_ss``.
    """
    with open(path) as fh:
        header = fh.readline().strip()
    if header != ",".join(CSV_COLUMNS):
        raise ValueError(f"unexpected CSV header {header!r}")
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    s, rho, rho_s, t, t_s, k1 = (data[:, i] for i in range(6))
    eh = np.exp(W.h(rho))
    rho_ss = eh * eh * W.h_rho(rho) * t_s**2 - eh * t_s * k1
    waist = int(np.argmin(np.abs(s)))
    return ProfileSolution(
        s=s, rho=rho, rho_s=rho_s, t=t, t_s=t_s, rho_ss=rho_ss,
        rho0=float(rho[waist]), warping=W, elliptic=F, options=options,
        termination="csv", mirrored=bool(s[0] < 0),
    )


def _json_safe(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None if math.isnan(value) else ("inf" if value > 0 else "-inf")
    if isinstance(value, dict):
        return {k: _json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(v) for v in value]
    return value


def write_report(payload: dict, path: str | Path) -> None:
    Path(path).write_text(json.dumps(_json_safe(payload), indent=2, sort_keys=True) + "\n")


def format_float(x: float) -> str:
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return FLOAT_FMT % x


def write_sweep_csv(rows: list[dict], path: str | Path) -> None:
    lines = [",".join(SWEEP_COLUMNS)]
    for row in rows:
        lines.append(",".join([
            format_float(row["rho0"]),
            format_float(row["t0"]),
            row["classification"],
            format_float(row["h_rho_rho0_product"]),
            row["note"],
        ]))
    Path(path).write_text("\n".join(lines) + "\n")


# -- SVG --------------------------------------------------------------------

WIDTH, HEIGHT = 720, 480
MARGIN_LEFT, MARGIN_RIGHT, MARGIN_TOP, MARGIN_BOTTOM = 70, 30, 50, 50
RHO_VIEW_FACTOR = 8.0


def nice_ticks(lo: float, hi: float, target: int = 6) -> list[float]:
    """Round tick positions (1, 2 or 5 times a power of ten) covering [lo, hi]."""
    span = hi - lo
    if not span > 0:
        return [lo]
    raw = span / target
    power = 10.0 ** math.floor(math.log10(raw))
    step = next(m * power for m in (1, 2, 5, 10) if m * power >= raw)
    first = math.ceil(lo / step - 1e-9)
    last = math.floor(hi / step + 1e-9)
    return [round(k * step, 12) + 0.0 for k in range(first, last + 1)]


def render_svg(sol: ProfileSolution) -> str:
    """Standalone SVG of rho against t, with dashed lines at +-t0 when finite."""
    if len(sol) == 0:
        raise ValueError("empty solution")
    t0 = sol.t0_estimate
    asymptotes = [-t0, t0] if math.isfinite(t0) else []
    t_lo = min(float(sol.t.min()), *asymptotes) if asymptotes else float(sol.t.min())
    t_hi = max(float(sol.t.max()), *asymptotes) if asymptotes else float(sol.t.max())
    pad = 0.05 * (t_hi - t_lo or 1.0)
    t_lo, t_hi = t_lo - pad, t_hi + pad
    # the radius blows up along the tail; keep the waist region readable
    r_lo, r_hi = 0.0, 1.05 * min(float(sol.rho.max()), RHO_VIEW_FACTOR * sol.rho0)

    plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT
    plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM

    def px(t):
        return MARGIN_LEFT + (t - t_lo) / (t_hi - t_lo) * plot_w

    def py(r):
        return MARGIN_TOP + plot_h - (r - r_lo) / (r_hi - r_lo) * plot_h

    # drop points closer than a quarter pixel to the previous kept one
    points = []
    last = None
    for t, r in zip(sol.t.tolist(), sol.rho.tolist()):
        x, y = px(t), py(r)
        if last is None or abs(x - last[0]) + abs(y - last[1]) >= 0.25:
            points.append(f"{x:.2f},{y:.2f}")
            last = (x, y)
    if points[-1] != f"{px(sol.t[-1]):.2f},{py(sol.rho[-1]):.2f}":
        points.append(f"{px(sol.t[-1]):.2f},{py(sol.rho[-1]):.2f}")

    title = (
        f"rho(t) for rho0 = {sol.rho0:g}, h = {sol.warping.describe()}, "
        f"f = {sol.elliptic.describe()}"
    )
    x_axis, y_axis = py(r_lo), MARGIN_LEFT
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<defs><clipPath id="plot-area"><rect x="{MARGIN_LEFT}" y="{MARGIN_TOP}" '
        f'width="{plot_w}" height="{plot_h}"/></clipPath></defs>',
        f'<text class="title" x="{WIDTH / 2:.2f}" y="25" text-anchor="middle" '
        f'font-family="sans-serif" font-size="14">{escape(title)}</text>',
        f'<line class="axis" x1="{MARGIN_LEFT}" y1="{x_axis:.2f}" x2="{WIDTH - MARGIN_RIGHT}" '
        f'y2="{x_axis:.2f}" stroke="black"/>',
        f'<line class="axis" x1="{y_axis}" y1="{MARGIN_TOP}" x2="{y_axis}" y2="{x_axis:.2f}" stroke="black"/>',
    ]
    for tick in nice_ticks(t_lo, t_hi):
        x = px(tick)
        out.append(f'<line class="tick" x1="{x:.2f}" y1="{x_axis:.2f}" x2="{x:.2f}" y2="{x_axis + 5:.2f}" stroke="black"/>')
        out.append(
            f'<text class="tick-label" x="{x:.2f}" y="{x_axis + 18:.2f}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="11">{tick:g}</text>'
        )
    for tick in nice_ticks(r_lo, r_hi):
        y = py(tick)
        out.append(f'<line class="tick" x1="{y_axis - 5}" y1="{y:.2f}" x2="{y_axis}" y2="{y:.2f}" stroke="black"/>')
        out.append(
            f'<text class="tick-label" x="{y_axis - 8}" y="{y + 4:.2f}" text-anchor="end" '
            f'font-family="sans-serif" font-size="11">{tick:g}</text>'
        )
    out.append(f'<text x="{WIDTH - MARGIN_RIGHT}" y="{HEIGHT - 12}" text-anchor="end" '
               'font-family="sans-serif" font-size="12">t</text>')
    out.append(f'<text x="15" y="{MARGIN_TOP - 8}" font-family="sans-serif" font-size="12">rho</text>')
    for a in asymptotes:
        x = px(a)
        out.append(
            f'<line class="asymptote" data-t="{a:.6f}" x1="{x:.2f}" y1="{MARGIN_TOP}" x2="{x:.2f}" '
            f'y2="{x_axis:.2f}" stroke="gray" stroke-dasharray="6,4"/>'
        )
    out.append(
        f'<polyline class="profile" clip-path="url(#plot-area)" fill="none" stroke="navy" stroke-width="1.5" points="{" ".join(points)}"/>'
    )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_svg(sol: ProfileSolution, path: str | Path) -> None:
    Path(path).write_text(render_svg(sol))
