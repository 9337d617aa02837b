"""Struve-type series, Mittag-Leffler functions, fractional integrals,
and closed-form kinetic-equation solutions with residual verification."""

from .errors import (
    ConvergenceError,
    DomainError,
    FrackinError,
    GridTooCoarse,
    InsufficientGrid,
    NonFiniteError,
    PoleError,
    RangeError,
)
from .fractional_ops import (
    Grid,
    rl_integral_grid,
    rl_integral_power,
    rl_profile,
)
from .kinetic import (
    CorollaryTemplate,
    Forcing,
    KineticProblem,
    SolutionMode,
    SolutionSeries,
    SolutionTerm,
    build_solution,
    corollary_params,
    eval_solution,
    eval_solution_grid,
    haubold_series,
    haubold_solution,
)
from .special_functions import (
    SeriesSpec,
    gamma,
    generalized_struve,
    generalized_struve_grid,
    mittag_leffler,
    mittag_leffler_grid,
    reciprocal_gamma,
    struve_h,
    struve_h_with_derivatives,
    struve_l,
)
from .sumudu import (
    TransformPoint,
    check_rl_rule,
    sumudu_numeric,
    sumudu_power,
)
from .verify import (
    Adjudication,
    AdjudicationResult,
    ResidualReport,
    adjudicate,
    haubold_residual,
    residual,
)

__version__ = "0.1.0"

__all__ = [
    "FrackinError",
    "DomainError",
    "PoleError",
    "ConvergenceError",
    "NonFiniteError",
    "RangeError",
    "InsufficientGrid",
    "GridTooCoarse",
    "SeriesSpec",
    "gamma",
    "reciprocal_gamma",
    "mittag_leffler",
    "mittag_leffler_grid",
    "generalized_struve",
    "generalized_struve_grid",
    "struve_h",
    "struve_l",
    "struve_h_with_derivatives",
    "Grid",
    "rl_integral_power",
    "rl_integral_grid",
    "rl_profile",
    "TransformPoint",
    "sumudu_numeric",
    "sumudu_power",
    "check_rl_rule",
    "Forcing",
    "SolutionMode",
    "KineticProblem",
    "SolutionTerm",
    "SolutionSeries",
    "CorollaryTemplate",
    "build_solution",
    "eval_solution",
    "eval_solution_grid",
    "haubold_solution",
    "haubold_series",
    "corollary_params",
    "Adjudication",
    "ResidualReport",
    "AdjudicationResult",
    "residual",
    "adjudicate",
    "haubold_residual",
    "__version__",
]
