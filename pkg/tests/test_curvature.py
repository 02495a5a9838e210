import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from ewmt.curvature import (
    ArcState,
    CurvaturePair,
    GraphState,
    arc_curvatures,
    arc_curvatures_from_t_ss,
    arc_residual,
    arc_residual_Q,
    graph_curvatures,
    graph_residual,
    graph_residual_full,
    minimal_graph_rho_tt,
    rho_ss_from_constraint,
    t_ss_from_constraint,
    unit_normal,
    unit_speed_defect,
)
from ewmt.errors import DegenerateState
from ewmt.geometry import Point, WarpingFunction, metric_eval
from ewmt.weingarten import EllipticFunction

WARPINGS = [
    WarpingFunction.constant(0.0),
    WarpingFunction.linear(1.0),
    WarpingFunction.affine(0.5, -0.2),
    WarpingFunction.polynomial([0.0, 0.3, 0.2]),
]
ELLIPTICS = [EllipticFunction.zero(), EllipticFunction.sqrt_scaled(0.5), EllipticFunction.polynomial([0.2, -0.1])]


def graph_to_arc(W, g, rho_tt):
    """Reparametrize a graph state by arc length: returns (ArcState, rho_ss)."""
    e2h = math.exp(2 * W.h(g.rho))
    D = e2h + g.rho_t**2
    dD = 2 * e2h * W.h_rho(g.rho) * g.rho_t + 2 * g.rho_t * rho_tt
    sq = math.sqrt(D)
    rho_ss = (rho_tt / sq - g.rho_t * dD / (2 * D * sq)) / sq
    return ArcState(0.0, g.rho, g.rho_t / sq, g.t, 1 / sq), rho_ss


graph_states = st.builds(GraphState, st.just(0.0), st.floats(0.2, 2.5), st.floats(-4.0, 4.0))


@pytest.mark.parametrize("W", WARPINGS, ids=lambda W: W.describe())
@given(g=graph_states, rho_tt=st.floats(-5.0, 5.0))
def test_graph_and_arc_forms_agree(W, g, rho_tt):
    a, rho_ss = graph_to_arc(W, g, rho_tt)
    assert abs(unit_speed_defect(W, a)) < 1e-12
    pg = graph_curvatures(W, g, rho_tt)
    pa = arc_curvatures(W, a, rho_ss)
    assert pa.kappa1 == pytest.approx(pg.kappa1, rel=1e-9, abs=1e-9)
    assert pa.kappa2 == pytest.approx(pg.kappa2, rel=1e-12)


@pytest.mark.parametrize("W", WARPINGS, ids=lambda W: W.describe())
@given(g=graph_states, rho_tt=st.floats(-5.0, 5.0))
def test_two_kappa1_expressions_agree(W, g, rho_tt):
    assume(abs(g.rho_t) > 1e-3)
    a, rho_ss = graph_to_arc(W, g, rho_tt)
    t_ss = t_ss_from_constraint(W, a, rho_ss)
    k_rho = arc_curvatures(W, a, rho_ss).kappa1
    k_t = arc_curvatures_from_t_ss(W, a, t_ss).kappa1
    assert k_t == pytest.approx(k_rho, rel=1e-7, abs=1e-7)
    assert rho_ss_from_constraint(W, a, t_ss) == pytest.approx(rho_ss, rel=1e-7, abs=1e-7)


def test_catenoid_is_minimal():
    W = WarpingFunction.constant(0.0)
    for t in np.linspace(-2, 2, 9):
        g = GraphState(t, math.cosh(t), math.sinh(t))
        pair = graph_curvatures(W, g, math.cosh(t))
        assert pair.kappa1 == pytest.approx(-1 / math.cosh(t) ** 2)
        assert pair.kappa2 == pytest.approx(1 / math.cosh(t) ** 2)
        assert pair.H == pytest.approx(0.0, abs=1e-15)
        assert minimal_graph_rho_tt(W, g) == pytest.approx(math.cosh(t))


def test_waist_curvatures_for_linear_warp():
    # rho0 = 1, rho_tt = 2 e^2: kappa1 = e (e^2 - 2 e^2)/e^3 = -1, kappa2 = e/e = 1
    W = WarpingFunction.linear(1.0)
    pair = graph_curvatures(W, GraphState(0.0, 1.0, 0.0), 2 * math.e**2)
    assert pair.kappa1 == pytest.approx(-1.0)
    assert pair.kappa2 == pytest.approx(1.0)


@pytest.mark.parametrize("F", ELLIPTICS, ids=lambda F: F.describe())
@pytest.mark.parametrize("W", WARPINGS, ids=lambda W: W.describe())
def test_residual_slopes_match_finite_differences(W, F, rng):
    eps = 1e-6
    for _ in range(10):
        g = GraphState(0.0, rng.uniform(0.3, 2.0), rng.uniform(-2, 2))
        w = rng.uniform(-1, 3)
        r = graph_residual_full(W, F, g, w)
        fd = (graph_residual(W, F, g, w + eps) - graph_residual(W, F, g, w - eps)) / (2 * eps)
        assert r.slope == pytest.approx(fd, rel=1e-5, abs=1e-8)

        a, _ = graph_to_arc(W, g, 0.0)
        ra = arc_residual(W, F, a, w)
        fa = (arc_residual(W, F, a, w + eps).value - arc_residual(W, F, a, w - eps).value) / (2 * eps)
        assert ra.slope == pytest.approx(fa, rel=1e-5, abs=1e-8)

        if abs(a.rho_s) > 1e-2:
            q, dq = arc_residual_Q(W, F, a.rho, a.rho_s, a.t_s, w)
            fq = (arc_residual_Q(W, F, a.rho, a.rho_s, a.t_s, w + eps)[0]
                  - arc_residual_Q(W, F, a.rho, a.rho_s, a.t_s, w - eps)[0]) / (2 * eps)
            assert dq == pytest.approx(fq, rel=1e-5, abs=1e-8)


@pytest.mark.parametrize("W", WARPINGS, ids=lambda W: W.describe())
def test_Q_is_the_residual_in_t_ss(W, rng):
    F = EllipticFunction.sqrt_scaled(0.5)
    for _ in range(10):
        g = GraphState(0.0, rng.uniform(0.3, 2.0), rng.uniform(0.2, 2))
        a, rho_ss = graph_to_arc(W, g, rng.uniform(-1, 3))
        t_ss = t_ss_from_constraint(W, a, rho_ss)
        q, _ = arc_residual_Q(W, F, a.rho, a.rho_s, a.t_s, t_ss)
        assert q == pytest.approx(arc_residual(W, F, a, rho_ss).value, abs=1e-9)


def test_degenerate_states_raise():
    W = WarpingFunction.linear(1.0)
    horizontal = ArcState(0.0, 1.0, 1.0, 0.0, 0.0)
    with pytest.raises(DegenerateState):
        arc_curvatures(W, horizontal, 0.0)
    with pytest.raises(DegenerateState):
        t_ss_from_constraint(W, horizontal, 0.0)
    waist = ArcState(0.0, 1.0, 0.0, 0.0, math.exp(-1.0))
    with pytest.raises(DegenerateState):
        arc_curvatures_from_t_ss(W, waist, 0.0)
    with pytest.raises(DegenerateState):
        arc_residual_Q(W, EllipticFunction.zero(), 1.0, 0.0, math.exp(-1.0), 0.0)
    with pytest.raises(DegenerateState):
        rho_ss_from_constraint(W, waist, 0.0)


@pytest.mark.parametrize("W", WARPINGS, ids=lambda W: W.describe())
@given(rho=st.floats(0.2, 2.0), theta=st.floats(-1.5, 1.5))
def test_unit_normal_is_unit_and_orthogonal(W, rho, theta):
    eh = math.exp(W.h(rho))
    a = ArcState(0.0, rho, math.sin(theta), 0.0, math.cos(theta) / eh)
    N = unit_normal(W, a)
    p = Point(rho, 0.0, 0.0)
    tangent = (a.rho_s, 0.0, a.t_s)
    assert metric_eval(W, p, N, N) == pytest.approx(1.0)
    assert metric_eval(W, p, N, tangent) == pytest.approx(0.0, abs=1e-12)


def test_curvature_pair_properties():
    pair = CurvaturePair(-3.0, 1.0)
    assert pair.H == -1.0
    assert pair.K == -3.0
    assert pair.half_difference**2 == pytest.approx(pair.H**2 - pair.K)
