"""Sampled generating curves and solver options."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .curvature import ArcState, CurvaturePair, arc_curvatures, t_ss_from_constraint
from .geometry import WarpingFunction
from .weingarten import EllipticFunction

CLASSIFICATIONS = ("catenoidal", "unbounded_height", "truncated")


@dataclass(frozen=True)
class SolverOptions:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    newton_tol: float = 1e-12
    newton_max_iter: int = 25
    max_step: float = 0.25
    s_max: float = 50.0
    rho_max: float = 1e6
    drift_tol: float = 1e-8

    def __post_init__(self):
        for name in ("rel_tol", "abs_tol", "newton_tol", "max_step", "s_max", "rho_max", "drift_tol"):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise ValueError(f"{name} must be positive and finite, got {value!r}")
        if self.newton_max_iter < 1:
            raise ValueError("newton_max_iter must be at least 1")


@dataclass(frozen=True)
class ProfileSolution:
    """Generating curve sampled in arc length, waist at s = 0, t(0) = 0.

    The half solution produced by the integrator covers s >= 0 only; the
    mirrored solution covers [-s_end, s_end] with the waist in the middle.
    ``rho_ss`` holds the value closed by the Newton solve at each sample.
    """

    s: np.ndarray
    rho: np.ndarray
    rho_s: np.ndarray
    t: np.ndarray
    t_s: np.ndarray
    rho_ss: np.ndarray
    rho0: float
    warping: WarpingFunction
    elliptic: EllipticFunction
    options: SolverOptions
    termination: str
    s0: float = 0.0
    t0_estimate: float = math.nan
    t0_error: float = math.nan
    classification: str = "truncated"
    mirrored: bool = False
    metadata: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.s)

    @property
    def samples(self) -> list[ArcState]:
        return [
            ArcState(*row)
            for row in zip(
                self.s.tolist(), self.rho.tolist(), self.rho_s.tolist(),
                self.t.tolist(), self.t_s.tolist(),
            )
        ]

    @property
    def waist_index(self) -> int:
        return int(np.argmin(np.abs(self.s - self.s0)))

    def state(self, i: int) -> ArcState:
        return ArcState(
            float(self.s[i]), float(self.rho[i]), float(self.rho_s[i]),
            float(self.t[i]), float(self.t_s[i]),
        )

    def curvatures(self) -> list[CurvaturePair]:
        return [arc_curvatures(self.warping, self.state(i), float(self.rho_ss[i])) for i in range(len(self))]

    def t_ss(self) -> np.ndarray:
        return np.array(
            [t_ss_from_constraint(self.warping, self.state(i), float(self.rho_ss[i])) for i in range(len(self))]
        )

    def positive_branch(self) -> "ProfileSolution":
        """Samples with s >= s0."""
        keep = self.s >= self.s0
        return self._select(keep, mirrored=False)

    def _select(self, keep: np.ndarray, **changes) -> "ProfileSolution":
        return replace(
            self,
            s=self.s[keep], rho=self.rho[keep], rho_s=self.rho_s[keep],
            t=self.t[keep], t_s=self.t_s[keep], rho_ss=self.rho_ss[keep],
            **changes,
        )

    def mirror(self) -> "ProfileSolution":
        """Extend a half solution to s < s0 by reflection in the slice t = t(s0)."""
        if self.mirrored:
            return self
        tail = slice(-1, 0, -1)
        t_waist = self.t[0]
        return replace(
            self,
            s=np.concatenate([2.0 * self.s0 - self.s[tail], self.s]),
            rho=np.concatenate([self.rho[tail], self.rho]),
            rho_s=np.concatenate([-self.rho_s[tail], self.rho_s]),
            t=np.concatenate([2.0 * t_waist - self.t[tail], self.t]),
            t_s=np.concatenate([self.t_s[tail], self.t_s]),
            rho_ss=np.concatenate([self.rho_ss[tail], self.rho_ss]),
            mirrored=True,
        )
