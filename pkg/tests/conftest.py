import math

import numpy as np
import pytest
from scipy.integrate import quad

from ewmt import EllipticFunction, SolverOptions, WarpingFunction, solve_profile


def linear_warp_t0(alpha: float, rho0: float = 1.0) -> float:
    """Asymptotic height for h(rho) = rho and f = alpha*sqrt(x), by quadrature.

    For this pair the Weingarten relation reduces to kappa1 = -kappa2/k with
    k = (1 + alpha)/(1 - alpha), which integrates once in graph form to

        rho_t^2 = (rho/rho0)^(2/k) exp(4 rho - 2 rho0) - exp(2 rho).

    t0 is then the integral of 1/rho_t from rho0 to infinity. The substitution
    rho = rho0 + u^2 removes the square-root singularity at the waist.
    alpha = 1 is the limit k -> inf (kappa1 = 0).
    """
    inv_k = (1.0 - alpha) / (1.0 + alpha)

    def w(rho):
        return (rho / rho0) ** (2.0 * inv_k) * math.exp(4.0 * rho - 2.0 * rho0) - math.exp(2.0 * rho)

    def integrand(u):
        if u == 0.0:
            # limit of 2u / sqrt(w(rho0 + u^2)) as u -> 0
            dw = (2.0 * inv_k / rho0 + 4.0) * math.exp(2.0 * rho0) - 2.0 * math.exp(2.0 * rho0)
            return 2.0 / math.sqrt(dw)
        return 2.0 * u / math.sqrt(w(rho0 + u * u))

    value, err = quad(integrand, 0.0, 12.0, epsabs=1e-14, epsrel=1e-13, limit=200)
    assert err < 1e-10
    return value


# frozen oracle values (checked against linear_warp_t0 in test_oracles.py)
T0_MINIMAL = 0.233336641
T0_HALF_SQRT = 0.308159831


@pytest.fixture(scope="session")
def linear_warp():
    return WarpingFunction.linear(1.0)


@pytest.fixture(scope="session")
def flat_warp():
    return WarpingFunction.constant(0.0)


@pytest.fixture(scope="session")
def half_sqrt():
    return EllipticFunction.sqrt_scaled(0.5)


@pytest.fixture(scope="session")
def example1(linear_warp):
    return solve_profile(linear_warp, EllipticFunction.zero(), 1.0)


@pytest.fixture(scope="session")
def example2(linear_warp, half_sqrt):
    return solve_profile(linear_warp, half_sqrt, 1.0)


@pytest.fixture(scope="session")
def catenary(flat_warp):
    with pytest.warns(UserWarning):
        return solve_profile(flat_warp, EllipticFunction.zero(), 1.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def short_options():
    return SolverOptions(s_max=5.0)
