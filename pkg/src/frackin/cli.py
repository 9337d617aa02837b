"""Command-line front end: evaluate functions, build solutions, verify.

Every subcommand prints a table, CSV by default or a JSON object with
`meta`, `rows`, and `summary` keys.  Floats are rendered with Python's
shortest round-trip representation, so identical invocations produce
byte-identical output.  Exit codes: 0 success, 2 argument parse error,
3 domain or convergence failure, 4 when `verify --expect` names a mode
the adjudication did not pass.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings

import numpy as np

from .errors import FrackinError
from .fractional_ops import Grid
from .kinetic import (
    KineticProblem,
    SolutionMode,
    build_solution,
    corollary_params,
    eval_solution_grid,
)
from .special_functions import SeriesSpec, generalized_struve, mittag_leffler
from .verify import Adjudication, adjudicate

__all__ = ["main"]


def _fmt(x: float) -> str:
    return repr(float(x))


def _emit(args, meta: dict, header: list[str], rows: list[list[float]],
          summary: dict) -> None:
    if args.format == "json":
        meta = dict(meta)
        meta["columns"] = header
        payload = {"meta": meta, "rows": rows, "summary": summary}
        text = json.dumps(payload, sort_keys=True, separators=(",", ": "),
                          indent=None) + "\n"
    else:
        lines = [",".join(header)]
        lines.extend(",".join(_fmt(x) for x in row) for row in rows)
        text = "\n".join(lines) + "\n"
    if args.output == "-":
        sys.stdout.write(text)
    else:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)


def _add_output_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("csv", "json"), default="csv",
                   help="output format (default csv)")
    p.add_argument("--output", default="-", metavar="PATH",
                   help="output file, '-' for standard output (default)")


def _add_grid_flags(p: argparse.ArgumentParser, default_n: int) -> None:
    p.add_argument("--tmin", type=float, default=0.01,
                   help="first grid point (default 0.01)")
    p.add_argument("--tmax", type=float, default=2.0,
                   help="last grid point (default 2.0)")
    p.add_argument("--n", type=int, default=default_n,
                   help=f"number of grid points (default {default_n})")
    p.add_argument("--spacing", choices=("uniform", "log"), default="uniform",
                   help="grid spacing (default uniform)")


def _add_series_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--lambda", dest="lam", type=float, default=1.0,
                   help="first gamma slope of the forcing series (default 1)")
    p.add_argument("--alpha-p", dest="alpha_p", type=float, default=1.0,
                   help="second gamma slope of the forcing series (default 1); "
                        "distinct from the Mittag-Leffler alpha")
    p.add_argument("--mu", type=float, default=1.5,
                   help="offset of the alpha-slope gamma (default 3/2)")
    p.add_argument("--l", dest="order", type=float, required=True,
                   help="series order l (required)")
    p.add_argument("--sigma", type=float, default=None,
                   help="offset of the lambda-slope gamma (default l + 3/2)")


def _add_problem_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--d", type=float, default=1.0,
                   help="forcing time-scale rate (default 1)")
    p.add_argument("--relax", type=float, default=None,
                   help="relaxation rate when distinct from --d "
                        "(family 3 only)")
    p.add_argument("--v", type=float, required=True,
                   help="fractional integral order, in (0, 2] (required)")
    p.add_argument("--n0", type=float, default=1.0,
                   help="initial number density (default 1)")


def _add_mode_flag(p: argparse.ArgumentParser) -> None:
    p.add_argument("--mode", choices=("stated", "corrected"),
                   default="corrected",
                   help="series convention to evaluate (default corrected)")


def _make_grid(args) -> Grid:
    if args.spacing == "log":
        return Grid.log(args.tmin, args.tmax, args.n)
    return Grid.uniform(args.tmin, args.tmax, args.n)


def _make_spec(args) -> SeriesSpec:
    mu = 1.5 if args.mu is None else args.mu
    return SeriesSpec(lam=args.lam, alpha=args.alpha_p, mu=mu,
                      order=args.order, sigma=args.sigma)


def _theorem_problem(args) -> KineticProblem:
    spec = _make_spec(args)
    if args.theorem == 1:
        if args.relax is not None and args.relax != args.d:
            raise FrackinError("family 1 ties the relaxation rate to --d")
        return KineticProblem.plain_time(spec, v=args.v, d=args.d, n0=args.n0)
    if args.theorem == 2:
        if args.relax is not None and args.relax != args.d:
            raise FrackinError("family 2 ties the relaxation rate to --d")
        return KineticProblem.powered_time(spec, v=args.v, d=args.d,
                                           n0=args.n0)
    if args.relax is None:
        raise FrackinError("family 3 requires --relax distinct from --d")
    return KineticProblem.powered_time_distinct(
        spec, v=args.v, d=args.d, relax=args.relax, n0=args.n0)


def _corollary_problem(args, cid: int) -> KineticProblem:
    template = corollary_params(cid)
    kwargs = dict(order=args.order, v=args.v, d=args.d, n0=args.n0)
    if args.relax is not None:
        kwargs["relax"] = args.relax
    if "lam" in template.free_parameters:
        kwargs["lam"] = args.lam
    if "alpha" in template.free_parameters:
        kwargs["alpha"] = args.alpha_p
    if "mu" in template.free_parameters and args.mu is not None:
        # here --mu is the scaled-offset divisor, not the series offset
        kwargs["mu"] = args.mu
    return template.make_problem(**kwargs)


def _cmd_eval_struve(args) -> int:
    spec = _make_spec(args)
    rows = [[z, generalized_struve(spec, z)] for z in args.z]
    meta = {"command": "eval-struve",
            "params": {"lambda": spec.lam, "alpha_p": spec.alpha,
                       "mu": spec.mu, "l": spec.order, "sigma": spec.sigma}}
    _emit(args, meta, ["z", "value"], rows, {"n": len(rows)})
    return 0


def _cmd_eval_mlf(args) -> int:
    rows = [[z, mittag_leffler(args.alpha, args.beta, z)] for z in args.z]
    meta = {"command": "eval-mlf",
            "params": {"alpha": args.alpha, "beta": args.beta}}
    _emit(args, meta, ["z", "value"], rows, {"n": len(rows)})
    return 0


def _solution_table(args, problem: KineticProblem, meta: dict) -> int:
    mode = SolutionMode(args.mode)
    grid = _make_grid(args)
    sol = build_solution(problem, mode, t_max=grid.points[-1])
    values = eval_solution_grid(sol, grid.array)
    rows = [[t, val] for t, val in zip(grid.points, values)]
    summary = {"mode": mode.value, "truncation_k": sol.truncation_k,
               "n": len(rows)}
    _emit(args, meta, ["t", "value"], rows, summary)
    return 0


def _cmd_solve(args) -> int:
    problem = _theorem_problem(args)
    meta = {"command": "solve",
            "params": {"theorem": args.theorem, "lambda": args.lam,
                       "alpha_p": args.alpha_p, "mu": args.mu,
                       "l": args.order,
                       "sigma": problem.forcing_spec.sigma,
                       "d": args.d, "relax": problem.relax, "v": args.v,
                       "n0": args.n0}}
    return _solution_table(args, problem, meta)


def _cmd_corollary(args) -> int:
    problem = _corollary_problem(args, args.id)
    spec = problem.forcing_spec
    meta = {"command": "corollary",
            "params": {"id": args.id, "lambda": spec.lam,
                       "alpha_p": spec.alpha, "mu": spec.mu, "l": spec.order,
                       "sigma": spec.sigma, "d": args.d,
                       "relax": problem.relax, "v": args.v, "n0": args.n0}}
    return _solution_table(args, problem, meta)


def _cmd_haubold(args) -> int:
    from .kinetic import haubold_series

    sol = haubold_series(args.c, args.v, args.n0)
    grid = _make_grid(args)
    values = eval_solution_grid(sol, grid.array)
    rows = [[t, val] for t, val in zip(grid.points, values)]
    meta = {"command": "haubold",
            "params": {"c": args.c, "v": args.v, "n0": args.n0}}
    _emit(args, meta, ["t", "value"], rows, {"n": len(rows)})
    return 0


def _cmd_verify(args) -> int:
    if args.corollary is not None:
        problem = _corollary_problem(args, args.corollary)
        source = {"corollary": args.corollary}
    else:
        problem = _theorem_problem(args)
        source = {"theorem": args.theorem}
    grid = _make_grid(args)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        result = adjudicate(problem, grid, tol_rel=args.tol)
    passing = []
    if result.verdict in (Adjudication.STATED_PASSES, Adjudication.BOTH_PASS):
        passing.append("stated")
    if result.verdict in (Adjudication.CORRECTED_PASSES,
                          Adjudication.BOTH_PASS):
        passing.append("corrected")
    rows = [
        [t, rs, rc]
        for t, rs, rc in zip(grid.points, result.stated.residual,
                             result.corrected.residual)
    ]
    params = dict(result.stated.problem_summary)
    params.update(source)
    meta = {"command": "verify", "params": params}
    summary = {
        "adjudication": result.verdict.value,
        "passing": passing,
        "tol_rel": args.tol,
        "scale": result.stated.scale,
        "stated": {"max_abs": result.stated.max_abs,
                   "max_abs_refined": result.stated_refined.max_abs},
        "corrected": {"max_abs": result.corrected.max_abs,
                      "max_abs_refined": result.corrected_refined.max_abs},
    }
    _emit(args, meta, ["t", "residual_stated", "residual_corrected"], rows,
          summary)
    if args.expect is not None and args.expect not in passing:
        print(f"verify: expected mode '{args.expect}' did not pass "
              f"(verdict: {result.verdict.value})", file=sys.stderr)
        return 4
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="frackin",
        description="Struve-type series, Mittag-Leffler functions, and "
                    "fractional kinetic equation solutions with residual "
                    "verification.")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("eval-struve",
                       help="evaluate the generalized Struve series")
    _add_series_flags(p)
    p.add_argument("--z", type=float, nargs="+", required=True,
                   help="evaluation points, z >= 0")
    _add_output_flags(p)
    p.set_defaults(func=_cmd_eval_struve)

    p = sub.add_parser("eval-mlf",
                       help="evaluate the Mittag-Leffler function")
    p.add_argument("--alpha", type=float, required=True,
                   help="first index, > 0")
    p.add_argument("--beta", type=float, required=True, help="second index")
    p.add_argument("--z", type=float, nargs="+", required=True,
                   help="evaluation points, |z| <= 100")
    _add_output_flags(p)
    p.set_defaults(func=_cmd_eval_mlf)

    p = sub.add_parser("solve",
                       help="tabulate a kinetic-equation solution series")
    p.add_argument("--theorem", type=int, choices=(1, 2, 3), required=True,
                   help="solution family: 1 plain-time forcing, 2 "
                        "powered-time, 3 powered-time with distinct "
                        "relaxation rate")
    _add_series_flags(p)
    _add_problem_flags(p)
    _add_mode_flag(p)
    _add_grid_flags(p, default_n=200)
    _add_output_flags(p)
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("verify",
                       help="residual-adjudicate both series conventions")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--theorem", type=int, choices=(1, 2, 3),
                       help="solution family to verify")
    group.add_argument("--corollary", type=int, choices=range(1, 13),
                       metavar="{1..12}", help="specialized family to verify")
    _add_series_flags_optional(p)
    _add_problem_flags(p)
    p.add_argument("--tol", type=float, default=1e-4,
                   help="relative residual tolerance (default 1e-4)")
    p.add_argument("--expect", choices=("stated", "corrected"), default=None,
                   help="exit 4 unless this mode passes")
    _add_grid_flags(p, default_n=2048)
    _add_output_flags(p)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("corollary",
                       help="tabulate one of the twelve specialized series")
    p.add_argument("--id", type=int, choices=range(1, 13), required=True,
                   metavar="{1..12}", help="specialized family id")
    _add_series_flags_optional(p)
    _add_problem_flags(p)
    _add_mode_flag(p)
    _add_grid_flags(p, default_n=200)
    _add_output_flags(p)
    p.set_defaults(func=_cmd_corollary)

    p = sub.add_parser("haubold",
                       help="tabulate the pure-relaxation baseline")
    p.add_argument("--c", type=float, required=True,
                   help="relaxation rate, > 0")
    p.add_argument("--v", type=float, required=True,
                   help="fractional order, in (0, 2]")
    p.add_argument("--n0", type=float, default=1.0,
                   help="initial number density (default 1)")
    _add_grid_flags(p, default_n=200)
    _add_output_flags(p)
    p.set_defaults(func=_cmd_haubold)

    return parser


def _add_series_flags_optional(p: argparse.ArgumentParser) -> None:
    # verify/corollary take the same series flags but with a default order,
    # since the specialized templates fix most parameters themselves
    p.add_argument("--lambda", dest="lam", type=float, default=1.0,
                   help="first gamma slope of the forcing series (default 1)")
    p.add_argument("--alpha-p", dest="alpha_p", type=float, default=1.0,
                   help="second gamma slope of the forcing series (default 1)")
    p.add_argument("--mu", type=float, default=None,
                   help="offset of the alpha-slope gamma (default 3/2); for "
                        "specialized families 10-12 this is instead the "
                        "scaled-offset divisor")
    p.add_argument("--l", dest="order", type=float, default=1.0,
                   help="series order l (default 1)")
    p.add_argument("--sigma", type=float, default=None,
                   help="offset of the lambda-slope gamma (default l + 3/2)")


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FrackinError as exc:
        print(f"frackin: error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
