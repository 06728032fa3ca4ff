"""Command-line front end.

Exit codes: 0 when every verdict passes, 1 for bad usage, 2 when the
input fails to parse or validate (or the numerics give up), 3 when a
verdict fails. A crash and a failed inequality are different things;
keeping 2 and 3 apart is the whole point of the convention.

The negcap mode maps its verdict the other way around: that experiment
exists to demonstrate entropy decreasing, so a decrease is the pass.
"""

from __future__ import annotations

import argparse
import os
import sys

from .errors import UsageError, ValidationError
from .numerics import DEFAULT_QUAD_TOL
from .runner import (
    SWEEPABLE,
    Options,
    emit_csv,
    emit_report,
    run_scenario,
    run_solve,
    run_sweep,
    run_thermo,
)
from .scenario import load_scenario, optional_number
from .theorems import DEFAULT_VERDICT_TOL

ENV_TOL = "INEQ_DEFAULT_TOL"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _parse_range(text: str):
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected LO:HI:STEPS, got {text!r}")
    try:
        lo, hi, steps = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected real bounds and an integer step count, got {text!r}"
        )
    if steps < 2:
        raise argparse.ArgumentTypeError(f"a sweep needs at least 2 steps, got {steps}")
    return lo, hi, steps


def _parse_reals(text: str):
    parts = [p.strip() for p in text.split(",")]
    try:
        values = [float(p) for p in parts]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated reals, got {text!r}")
    return values


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--tol", type=float, default=None, help="verdict tolerance (default 1e-8)"
    )
    common.add_argument(
        "--quad-tol",
        type=float,
        default=None,
        dest="quad_tol",
        help="quadrature error budget (default 1e-10)",
    )
    common.add_argument(
        "--format",
        choices=("table", "csv", "json"),
        default="table",
        dest="fmt",
        help="report format (sweep always writes CSV)",
    )
    common.add_argument(
        "--seed",
        type=int,
        default=None,
        help="recorded for invocation bookkeeping; the pipeline is deterministic",
    )

    parser = _Parser(
        prog="thermineq",
        description="Check entropy-style integral inequalities and run heat-exchange scenarios.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    p = sub.add_parser(
        "verify", parents=[common], help="run a scenario file and check its verdict"
    )
    p.add_argument("file", help="scenario file (JSON)")

    p = sub.add_parser(
        "solve",
        parents=[common],
        help="report the balance point of a reversible or powermean scenario",
    )
    p.add_argument("file", help="scenario file (JSON)")

    p = sub.add_parser(
        "sweep",
        parents=[common],
        help="re-run a scenario over a parameter grid, one CSV row per point",
    )
    p.add_argument("file", help="scenario file (JSON)")
    p.add_argument(
        "--param", required=True, help=f"field to sweep, one of: {', '.join(SWEEPABLE)}"
    )
    p.add_argument(
        "--range", required=True, type=_parse_range, dest="grid", metavar="LO:HI:STEPS"
    )

    p = sub.add_parser(
        "jensen", parents=[common], help="mean of h against h of the mean, no file needed"
    )
    p.add_argument("--h", required=True, help="expression for the convex function")
    p.add_argument(
        "--ys", required=True, type=_parse_reals, help="comma-separated sample points"
    )

    p = sub.add_parser(
        "counterexample",
        parents=[common],
        help="discriminant of the even-exponent balance polynomial for two blocks",
    )
    p.add_argument("--x1", required=True, type=float)
    p.add_argument("--x2", required=True, type=float)

    p = sub.add_parser(
        "thermo", parents=[common], help="physics reading: heat and entropy ledger"
    )
    p.add_argument("kind", choices=("reversible", "irreversible", "reservoir", "negcap"))
    p.add_argument("file", help="scenario file (JSON)")

    return parser


def _options(args, data=None) -> Options:
    """Tolerance precedence: flag, then scenario file, then env, then builtin."""
    tol = DEFAULT_VERDICT_TOL
    env = os.environ.get(ENV_TOL)
    if env is not None:
        try:
            tol = float(env)
        except ValueError:
            raise ValidationError(f"{ENV_TOL} must be a real number, got {env!r}")
    if data is not None:
        tol = optional_number(data, "tol", default=tol)
    if args.tol is not None:
        tol = args.tol
    quad_tol = DEFAULT_QUAD_TOL
    if data is not None:
        quad_tol = optional_number(data, "quad_tol", default=quad_tol)
    if args.quad_tol is not None:
        quad_tol = args.quad_tol
    return Options(tol=tol, quad_tol=quad_tol, fmt=args.fmt)


def _dispatch(args) -> int:
    if args.command == "sweep":
        data = load_scenario(args.file)
        if args.param not in SWEEPABLE:
            raise UsageError(
                f"--param must be one of {', '.join(SWEEPABLE)}, got {args.param!r}"
            )
        opts = _options(args, data)
        lo, hi, steps = args.grid
        rows, ok = run_sweep(data, args.param, lo, hi, steps, opts)
        emit_csv(rows, sys.stdout)
        return 0 if ok else 3

    if args.command == "verify":
        data = load_scenario(args.file)
        opts = _options(args, data)
        report = run_scenario(data, opts)
    elif args.command == "solve":
        data = load_scenario(args.file)
        opts = _options(args, data)
        report = run_solve(data, opts)
    elif args.command == "thermo":
        data = load_scenario(args.file, default_mode=args.kind)
        if data["mode"] != args.kind:
            raise ValidationError(
                f"{args.file}: file says mode {data['mode']!r} but the "
                f"command asked for {args.kind!r}"
            )
        opts = _options(args, data)
        report = run_thermo(data, opts)
    elif args.command == "jensen":
        data = {"mode": "jensen", "h": args.h, "ys": args.ys}
        opts = _options(args, data)
        report = run_scenario(data, opts)
    else:
        data = {"mode": "counterexample", "x1": args.x1, "x2": args.x2}
        opts = _options(args, data)
        report = run_scenario(data, opts)

    emit_report(report, opts.fmt, sys.stdout)
    return 0 if report["satisfied"] else 3


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return _dispatch(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def run() -> None:
    raise SystemExit(main())


__all__ = ["build_parser", "main", "run"]
