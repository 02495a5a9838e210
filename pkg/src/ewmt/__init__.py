"""Rotational elliptic Weingarten minimal-type surfaces in R^2 x_h R."""

from .analysis import InvariantReport, verify_invariants
from .geometry import WarpingFunction
from .profile import ProfileSolution, SolverOptions
from .solver import integrate_arc, integrate_graph, solve_profile
from .weingarten import EllipticFunction

__all__ = [
    "EllipticFunction",
    "InvariantReport",
    "ProfileSolution",
    "SolverOptions",
    "WarpingFunction",
    "integrate_arc",
    "integrate_graph",
    "solve_profile",
    "verify_invariants",
]
