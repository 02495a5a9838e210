import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ewmt.errors import AxisSingularity
from ewmt.geometry import (
    OMEGA,
    RHO,
    T,
    Point,
    WarpingFunction,
    christoffel,
    covariant_derivative,
    killing_residual,
    metric_diagonal,
    metric_eval,
    same_point,
)

WARPINGS = [
    WarpingFunction.constant(0.0),
    WarpingFunction.constant(0.7),
    WarpingFunction.linear(1.0),
    WarpingFunction.affine(-0.5, 0.3),
    WarpingFunction.polynomial([0.1, 0.4, -0.2, 0.05]),
]


def fd_metric_christoffel(W, p, eps=1e-6):
    """Levi-Civita symbols from finite differences of the metric alone."""
    g = metric_diagonal(W, p)
    dg = np.zeros((3, 3))  # dg[l, i] = d_l g_ii
    for l in range(3):
        e = np.zeros(3)
        e[l] = eps
        plus = metric_diagonal(W, Point(*(np.array(p) + e)))
        minus = metric_diagonal(W, Point(*(np.array(p) - e)))
        dg[l] = (plus - minus) / (2 * eps)
    gamma = np.zeros((3, 3, 3))
    for i in range(3):
        for j in range(3):
            for k in range(3):
                # Gamma^k_ij = 1/2 g^kk (d_i g_jk + d_j g_ik - d_k g_ij), diagonal metric
                term = (dg[i, j] if j == k else 0.0) + (dg[j, i] if i == k else 0.0) - (dg[k, i] if i == j else 0.0)
                gamma[i, j, k] = 0.5 * term / g[k]
    return gamma


points = st.builds(
    Point,
    st.floats(0.1, 3.0),
    st.floats(-10.0, 10.0),
    st.floats(-5.0, 5.0),
)


@pytest.mark.parametrize("W", WARPINGS, ids=lambda W: W.describe())
def test_christoffel_matches_metric_finite_differences(W, rng):
    for _ in range(20):
        p = Point(rng.uniform(0.2, 2.5), rng.uniform(0, 2 * math.pi), rng.uniform(-3, 3))
        np.testing.assert_allclose(christoffel(W, p), fd_metric_christoffel(W, p), atol=1e-6, rtol=1e-6)


@pytest.mark.parametrize("W", WARPINGS, ids=lambda W: W.describe())
@given(p=points)
def test_torsion_free(W, p):
    gamma = christoffel(W, p)
    assert np.array_equal(gamma, gamma.transpose(1, 0, 2))


@pytest.mark.parametrize("W", WARPINGS, ids=lambda W: W.describe())
def test_metric_compatibility(W, rng):
    # Y g(X_j, X_k) = g(nabla_Y X_j, X_k) + g(X_j, nabla_Y X_k)
    eps = 1e-6
    basis = np.eye(3)
    for _ in range(25):
        p = np.array([rng.uniform(0.2, 2.5), rng.uniform(0, 6), rng.uniform(-3, 3)])
        Y = rng.normal(size=3)
        for j in range(3):
            for k in range(3):
                lhs = (
                    metric_eval(W, Point(*(p + eps * Y)), basis[j], basis[k])
                    - metric_eval(W, Point(*(p - eps * Y)), basis[j], basis[k])
                ) / (2 * eps)
                P = Point(*p)
                rhs = metric_eval(W, P, covariant_derivative(W, P, Y, j), basis[k]) + metric_eval(
                    W, P, basis[j], covariant_derivative(W, P, Y, k)
                )
                assert lhs == pytest.approx(rhs, abs=1e-4)


@pytest.mark.parametrize("field", ["d_t", "d_omega"])
@pytest.mark.parametrize("W", WARPINGS, ids=lambda W: W.describe())
def test_rotation_and_translation_are_killing(W, field, rng):
    for _ in range(100):
        p = Point(rng.uniform(0.1, 3.0), rng.uniform(0, 2 * math.pi), rng.uniform(-5, 5))
        Y, Z = rng.normal(size=3), rng.normal(size=3)
        assert abs(killing_residual(W, field, p, Y, Z)) < 1e-10


def test_radial_field_is_not_killing():
    W = WarpingFunction.linear(1.0)
    p = Point(1.0, 0.0, 0.0)
    e_omega = np.array([0.0, 1.0, 0.0])
    # g(nabla_{d_omega} d_rho, d_omega) = rho, so the residual is 2 rho
    assert killing_residual(W, "d_rho", p, e_omega, e_omega) == pytest.approx(2.0)


def test_killing_rejects_unknown_field():
    with pytest.raises(ValueError):
        killing_residual(WarpingFunction.linear(), "d_x", Point(1, 0, 0), [1, 0, 0], [1, 0, 0])


def test_christoffel_singular_on_axis():
    with pytest.raises(AxisSingularity):
        christoffel(WarpingFunction.linear(), Point(0.0, 0.0, 0.0))


def test_christoffel_known_entries():
    W = WarpingFunction.linear(1.0)
    gamma = christoffel(W, Point(2.0, 0.3, 1.0))
    assert gamma[OMEGA, RHO, OMEGA] == pytest.approx(0.5)
    assert gamma[OMEGA, OMEGA, RHO] == pytest.approx(-2.0)
    assert gamma[T, T, RHO] == pytest.approx(-math.exp(4.0))
    assert gamma[RHO, T, T] == pytest.approx(1.0)
    assert np.count_nonzero(gamma) == 6


def test_metric_eval_rejects_negative_radius():
    with pytest.raises(ValueError):
        metric_eval(WarpingFunction.linear(), Point(-1.0, 0, 0), [1, 0, 0], [1, 0, 0])


def test_same_point_wraps_angle():
    assert same_point(Point(1.0, 0.1, 2.0), Point(1.0, 0.1 + 2 * math.pi, 2.0))
    assert not same_point(Point(1.0, 0.1, 2.0), Point(1.0, 0.2, 2.0))


class TestWarpingFunction:
    @pytest.mark.parametrize(
        "W, rho, h, h_rho",
        [
            (WarpingFunction.constant(0.7), 2.0, 0.7, 0.0),
            (WarpingFunction.linear(3.0), 2.0, 6.0, 3.0),
            (WarpingFunction.affine(2.0, -1.0), 0.5, 0.0, 2.0),
            (WarpingFunction.polynomial([1.0, 0.0, 2.0]), 3.0, 19.0, 12.0),
        ],
    )
    def test_values(self, W, rho, h, h_rho):
        assert W.h(rho) == pytest.approx(h)
        assert W.h_rho(rho) == pytest.approx(h_rho)

    @given(
        coeffs=st.lists(st.floats(-2.0, 2.0), min_size=1, max_size=5),
        rho=st.floats(0.1, 2.0),
    )
    def test_derivative_matches_finite_difference(self, coeffs, rho):
        W = WarpingFunction.polynomial(coeffs)
        eps = 1e-6
        fd = (W.h(rho + eps) - W.h(rho - eps)) / (2 * eps)
        assert W.h_rho(rho) == pytest.approx(fd, abs=1e-6)

    def test_vectorized(self):
        W = WarpingFunction.polynomial([0.0, 1.0, 1.0])
        rho = np.array([0.0, 1.0, 2.0])
        np.testing.assert_allclose(W.h(rho), [0.0, 2.0, 6.0])
        np.testing.assert_allclose(W.h_rho(rho), [1.0, 3.0, 5.0])

    @pytest.mark.parametrize("family, coeffs", [("linear", (1.0, 2.0)), ("affine", (1.0,)), ("cubic", (1.0,))])
    def test_rejects_invalid_parameters(self, family, coeffs):
        with pytest.raises(ValueError):
            WarpingFunction(family, coeffs)
