"""Riemann-Liouville fractional integration of order v > 0.

Two routes are provided.  `rl_integral_power` is the closed form on
monomials.  `rl_integral_grid` integrates arbitrary sampled functions by
product quadrature: the function is replaced by its piecewise-linear
interpolant between samples (including the origin) and the weakly
singular kernel (t-s)^(v-1) is integrated exactly against that
interpolant on every panel.  The kernel's endpoint singularity at s=t is
therefore handled without mesh grading, and the quadrature weights do not
depend on the samples, so the operator is linear in them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DomainError, InsufficientGrid
from .special_functions import gamma

__all__ = ["Grid", "rl_integral_power", "rl_integral_grid", "rl_profile"]


@dataclass(frozen=True)
class Grid:
    """Strictly increasing evaluation times t_1 < ... < t_n, all positive.

    The origin is not stored: every quadrature that consumes the grid
    supplies an extra sample at s=0, and the panel [0, t_1] is always part
    of the integration range.  `max_spacing` includes that origin panel.
    """

    points: tuple[float, ...]

    def __post_init__(self) -> None:
        pts = tuple(float(p) for p in self.points)
        object.__setattr__(self, "points", pts)
        if len(pts) < 2:
            raise DomainError(f"grid needs at least 2 points, got {len(pts)}")
        if pts[0] <= 0.0:
            raise DomainError(f"grid points must be positive, got {pts[0]!r}")
        for a, b in zip(pts, pts[1:]):
            if not b > a:
                raise DomainError("grid points must be strictly increasing")

    @classmethod
    def uniform(cls, t_min: float, t_max: float, n: int) -> "Grid":
        if not (0.0 < t_min < t_max):
            raise DomainError(
                f"uniform grid needs 0 < t_min < t_max, got [{t_min!r}, {t_max!r}]"
            )
        return cls(tuple(np.linspace(t_min, t_max, int(n))))

    @classmethod
    def log(cls, t_min: float, t_max: float, n: int) -> "Grid":
        if not (0.0 < t_min < t_max):
            raise DomainError(
                f"log grid needs 0 < t_min < t_max, got [{t_min!r}, {t_max!r}]"
            )
        return cls(tuple(np.geomspace(t_min, t_max, int(n))))

    @cached_property
    def array(self) -> np.ndarray:
        arr = np.asarray(self.points, dtype=float)
        arr.flags.writeable = False
        return arr

    @property
    def n(self) -> int:
        return len(self.points)

    @cached_property
    def max_spacing(self) -> float:
        arr = self.array
        return float(max(arr[0], np.max(np.diff(arr))))

    def refine(self) -> "Grid":
        """New grid with every panel midpoint inserted, origin panel included.

        Halves max_spacing; used by verification to separate quadrature
        error (which shrinks) from structural error (which does not).
        """
        arr = self.array
        mids = 0.5 * (arr[:-1] + arr[1:])
        first = 0.5 * arr[0]
        return Grid(tuple(np.sort(np.concatenate(([first], arr, mids)))))


def rl_integral_power(a: float, v: float, t: float) -> float:
    """Closed form of the order-v integral of s^a at time t:
    Gamma(a+1)/Gamma(a+1+v) * t^(a+v)."""
    a = float(a)
    v = float(v)
    t = float(t)
    if not a > -1.0:
        raise DomainError(f"rl_integral_power requires a > -1, got {a!r}")
    if not v > 0.0:
        raise DomainError(f"rl_integral_power requires v > 0, got {v!r}")
    if not t > 0.0:
        raise DomainError(f"rl_integral_power requires t > 0, got {t!r}")
    return gamma(a + 1.0) / gamma(a + 1.0 + v) * t ** (a + v)


def _panel_moments(t: float, nodes: np.ndarray, v: float):
    """Exact kernel moments of (t-s)^(v-1) against 1 and (s - s_j) per panel.

    With tau = t - s (so tau decreases along the panel), the two moments
    reduce to differences of tau^v / v and tau^(v+1) / (v+1).
    """
    tau = t - nodes
    tau = np.maximum(tau, 0.0)
    tau_v = tau ** v
    tau_v1 = tau ** (v + 1.0)
    m0 = (tau_v[:-1] - tau_v[1:]) / v
    m1 = tau[:-1] * m0 - (tau_v1[:-1] - tau_v1[1:]) / (v + 1.0)
    return m0, m1


def rl_integral_grid(grid: Grid, samples, v: float, t_index: int) -> float:
    """Order-v Riemann-Liouville integral at grid point t_index.

    `samples` holds function values at [0, t_1, ..., t_n] (origin first,
    one more entry than the grid).  The integrand between consecutive
    samples is the linear interpolant; the kernel is integrated exactly
    against it panel by panel, which gives second-order convergence in
    max spacing for smooth integrands.
    """
    v = float(v)
    if not v > 0.0:
        raise DomainError(f"rl_integral_grid requires v > 0, got {v!r}")
    f = np.asarray(samples, dtype=float)
    if f.shape != (grid.n + 1,):
        raise DomainError(
            f"samples must cover the origin plus all {grid.n} grid points, "
            f"got shape {f.shape}"
        )
    t_index = int(t_index)
    if not 0 <= t_index < grid.n:
        raise InsufficientGrid(
            f"t_index {t_index} outside grid of {grid.n} points"
        )
    nodes = np.concatenate(([0.0], grid.array[: t_index + 1]))
    t = grid.array[t_index]
    m0, m1 = _panel_moments(t, nodes, v)
    lengths = np.diff(nodes)
    slopes = np.diff(f[: t_index + 2]) / lengths
    acc = float(np.dot(f[: t_index + 1], m0) + np.dot(slopes, m1))
    return acc / gamma(v)


def rl_profile(grid: Grid, samples, v: float) -> np.ndarray:
    """rl_integral_grid at every grid index, as one array.

    Same quadrature as the scalar entry point; the O(n^2) panel moments
    are batched per target time.
    """
    v = float(v)
    if not v > 0.0:
        raise DomainError(f"rl_profile requires v > 0, got {v!r}")
    f = np.asarray(samples, dtype=float)
    if f.shape != (grid.n + 1,):
        raise DomainError(
            f"samples must cover the origin plus all {grid.n} grid points, "
            f"got shape {f.shape}"
        )
    nodes = np.concatenate(([0.0], grid.array))
    lengths = np.diff(nodes)
    slopes = np.diff(f) / lengths
    g = gamma(v)
    out = np.empty(grid.n)
    for i in range(grid.n):
        m0, m1 = _panel_moments(nodes[i + 1], nodes[: i + 2], v)
        out[i] = (np.dot(f[: i + 1], m0) + np.dot(slopes[: i + 1], m1)) / g
    return out
