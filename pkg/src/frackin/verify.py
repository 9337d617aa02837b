"""Residual checks that decide which solution mode solves the equation.

A candidate N is substituted back into
N(t) - N0*f(t) + relax^v * (I^v N)(t) = 0 on a grid, with the memory
integral I^v evaluated by product quadrature.  The residual's maximum
magnitude, compared against a tolerance relative to the forcing scale,
and its behaviour under grid refinement, drive the adjudication between
the STATED and CORRECTED series modes.  A structurally wrong candidate
leaves a residual that stalls under refinement; a correct one leaves only
quadrature error, which shrinks.
"""

from __future__ import annotations

import enum
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .errors import DomainError, GridTooCoarse
from .fractional_ops import Grid, rl_profile
from .kinetic import (
    Forcing,
    KineticProblem,
    SolutionMode,
    SolutionSeries,
    build_solution,
    eval_solution_grid,
    haubold_series,
)
from .special_functions import generalized_struve_grid, reciprocal_gamma

__all__ = [
    "Adjudication",
    "ResidualReport",
    "AdjudicationResult",
    "residual",
    "adjudicate",
    "haubold_residual",
    "DEFAULT_T_CAP",
]

DEFAULT_T_CAP = 5.0
_NOISE_FLOOR = 1e-12
_SHRINK = 0.9


class Adjudication(enum.Enum):
    """Outcome of the two-mode residual comparison."""

    STATED_PASSES = "stated_passes"
    CORRECTED_PASSES = "corrected_passes"
    BOTH_PASS = "both_pass"
    NEITHER_PASS = "neither_pass"


@dataclass(frozen=True)
class ResidualReport:
    """Residual of one candidate on one grid.

    `scale` is the maximum magnitude of the forcing term N0*f over the
    grid; tolerances elsewhere are relative to it.  `adjudication` stays
    None until an adjudication pass fills it in.
    """

    problem_summary: dict
    mode: SolutionMode
    grid: Grid
    residual: np.ndarray
    max_abs: float
    scale: float
    adjudication: Adjudication | None = None


@dataclass(frozen=True)
class AdjudicationResult:
    """Verdict plus the four reports (each mode, base and refined grid)."""

    verdict: Adjudication
    stated: ResidualReport
    corrected: ResidualReport
    stated_refined: ResidualReport
    corrected_refined: ResidualReport


def _max_workers() -> int:
    """Thread cap from FRACKIN_THREADS; 1 (serial) when unset or invalid."""
    raw = os.environ.get("FRACKIN_THREADS", "")
    try:
        n = int(raw)
    except ValueError:
        return 1
    return max(1, n)


def _problem_summary(problem: KineticProblem) -> dict:
    spec = problem.forcing_spec
    return {
        "lam": spec.lam,
        "alpha": spec.alpha,
        "mu": spec.mu,
        "order": spec.order,
        "sigma": spec.sigma,
        "forcing_argument": problem.forcing_argument.value,
        "v": problem.v,
        "d": problem.d,
        "relax": problem.relax,
        "n0": problem.n0,
    }


def _forcing_values(problem: KineticProblem, ts: np.ndarray) -> np.ndarray:
    spec = problem.forcing_spec
    if problem.forcing_argument is Forcing.PLAIN:
        zs = ts
    else:
        zs = (problem.d * ts) ** problem.v
    return problem.n0 * generalized_struve_grid(spec, zs)


def _origin_value(sol: SolutionSeries) -> float:
    """Limit of the series at t -> 0+, used as the quadrature origin sample.

    Positive powers vanish, zero powers contribute coeff / Gamma(beta).
    A negative power diverges; the origin sample is then pinned to 0.0,
    a convention whose first-panel quadrature error vanishes under grid
    refinement because the integrand stays integrable.
    """
    value = 0.0
    for term in sol.terms:
        if term.power == 0.0:
            value += term.coeff * reciprocal_gamma(term.ml_beta)
    return value


def _residual_core(
    values: np.ndarray,
    origin: float,
    forcing: np.ndarray,
    relax: float,
    v: float,
    grid: Grid,
    summary: dict,
    mode: SolutionMode,
    tol_rel: float,
    warn: bool,
) -> ResidualReport:
    samples = np.concatenate(([origin], values))
    memory = rl_profile(grid, samples, v)
    res = values - forcing + relax ** v * memory
    scale = float(np.max(np.abs(forcing))) if forcing.size else 0.0
    report = ResidualReport(
        problem_summary=summary,
        mode=mode,
        grid=grid,
        residual=res,
        max_abs=float(np.max(np.abs(res))),
        scale=scale,
    )
    if warn and grid.n >= 8:
        # Richardson check of the quadrature alone: same samples on the
        # half-resolution subgrid, compared at the shared points.
        coarse_points = grid.array[1::2]
        coarse = Grid(tuple(coarse_points))
        coarse_samples = np.concatenate(([origin], values[1::2]))
        coarse_memory = rl_profile(coarse, coarse_samples, v)
        est = float(np.max(np.abs(memory[1::2] - coarse_memory))) / 3.0
        est *= relax ** v
        if est > 0.5 * tol_rel * max(scale, 1e-300):
            warnings.warn(
                f"quadrature error estimate {est:.3e} exceeds half the "
                f"residual tolerance {tol_rel * scale:.3e}; refine the grid",
                GridTooCoarse,
                stacklevel=3,
            )
    return report


def residual(
    problem: KineticProblem,
    mode: SolutionMode,
    grid: Grid,
    *,
    tol_rel: float = 1e-4,
    t_cap: float = DEFAULT_T_CAP,
    warn: bool = True,
) -> ResidualReport:
    """Substitute the mode's series into the equation on the grid."""
    if not isinstance(problem, KineticProblem):
        raise DomainError("residual expects a KineticProblem")
    if not isinstance(grid, Grid):
        raise DomainError("residual expects a Grid")
    if grid.points[-1] > t_cap:
        raise DomainError(
            f"grid extends to t={grid.points[-1]!r}, beyond the residual "
            f"window cap {t_cap!r}"
        )
    ts = grid.array
    sol = build_solution(problem, mode, t_max=grid.points[-1])
    values = eval_solution_grid(sol, ts)
    forcing = _forcing_values(problem, ts)
    return _residual_core(
        values,
        _origin_value(sol),
        forcing,
        problem.relax,
        problem.v,
        grid,
        _problem_summary(problem),
        mode,
        tol_rel,
        warn,
    )


def _mode_passes(base: ResidualReport, refined: ResidualReport, tol_rel: float) -> bool:
    tol = tol_rel * base.scale
    if base.max_abs > tol:
        return False
    if base.max_abs <= _NOISE_FLOOR * max(base.scale, 1.0):
        return True
    return refined.max_abs <= _SHRINK * base.max_abs


def adjudicate(
    problem: KineticProblem,
    grid: Grid,
    *,
    tol_rel: float = 1e-4,
    t_cap: float = DEFAULT_T_CAP,
) -> AdjudicationResult:
    """Decide which mode solves the equation on this grid.

    A mode passes when its residual is within tol_rel of the forcing
    scale and shrinks under one grid refinement (unless already at the
    noise floor, where shrinkage is not measurable).
    """
    fine = grid.refine()
    jobs = [
        (problem, SolutionMode.STATED, grid),
        (problem, SolutionMode.CORRECTED, grid),
        (problem, SolutionMode.STATED, fine),
        (problem, SolutionMode.CORRECTED, fine),
    ]

    def run(job):
        prob, mode, g = job
        return residual(prob, mode, g, tol_rel=tol_rel, t_cap=t_cap, warn=False)

    workers = min(_max_workers(), len(jobs))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            stated, corrected, stated_fine, corrected_fine = list(pool.map(run, jobs))
    else:
        stated, corrected, stated_fine, corrected_fine = [run(j) for j in jobs]

    stated_ok = _mode_passes(stated, stated_fine, tol_rel)
    corrected_ok = _mode_passes(corrected, corrected_fine, tol_rel)
    if stated_ok and corrected_ok:
        verdict = Adjudication.BOTH_PASS
    elif stated_ok:
        verdict = Adjudication.STATED_PASSES
    elif corrected_ok:
        verdict = Adjudication.CORRECTED_PASSES
    else:
        verdict = Adjudication.NEITHER_PASS
    return AdjudicationResult(
        verdict=verdict,
        stated=replace(stated, adjudication=verdict),
        corrected=replace(corrected, adjudication=verdict),
        stated_refined=replace(stated_fine, adjudication=verdict),
        corrected_refined=replace(corrected_fine, adjudication=verdict),
    )


def haubold_residual(
    c: float,
    v: float,
    grid: Grid,
    *,
    n0: float = 1.0,
    tol_rel: float = 1e-5,
    warn: bool = True,
) -> ResidualReport:
    """Residual of the pure-relaxation baseline, whose forcing is constant.

    The candidate N0 * E_{v,1}(-(c t)^v) is substituted into
    N(t) - N0 + c^v * (I^v N)(t) = 0.
    """
    if not isinstance(grid, Grid):
        raise DomainError("haubold_residual expects a Grid")
    sol = haubold_series(c, v, n0)
    ts = grid.array
    values = eval_solution_grid(sol, ts)
    forcing = np.full(ts.shape, float(n0))
    summary = {
        "forcing_argument": "constant",
        "v": float(v),
        "relax": float(c),
        "n0": float(n0),
    }
    return _residual_core(
        values,
        float(n0),
        forcing,
        float(c),
        float(v),
        grid,
        summary,
        SolutionMode.CORRECTED,
        tol_rel,
        warn,
    )
