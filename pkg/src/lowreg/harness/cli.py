"""Command-line driver.

    lowreg run --case poisson1d-single --order 2 --method schur --n 20,40,80 --out table.csv
    lowreg modes check
    lowreg oracle --case poisson2d-radial --n 20

Exit status: 0 on success, 2 on invalid input or a failed check, 1 on a
runtime error.  ``run --config FILE`` reads the same keys as the flags from
a JSON object (``case``, ``order``, ``method``, ``n``, ``out``, ``format``,
``field_out``, ``allow_fine``); flags given on the command line win.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

import numpy as np

from ..errors import LowRegError
from .cases import CASE_IDS, builtin_case
from .checks import mode_derivative_suite, oracle_check
from .convergence import (
    DEFAULT_N_1D,
    DEFAULT_N_2D,
    METHODS,
    ExperimentConfig,
    emit_field,
    format_report,
    run_case,
    run_experiment,
)

log = logging.getLogger(__name__)

EXIT_OK, EXIT_RUNTIME, EXIT_INVALID = 0, 1, 2
MAX_2D_N = 320

RUN_DEFAULTS = {
    "case": "poisson1d-single",
    "order": 2,
    "method": "schur",
    "n": None,
    "out": None,
    "format": "csv",
    "field_out": None,
    "allow_fine": False,
}


class ValidationError(Exception):
    pass


def _parse_n(text) -> tuple[int, ...]:
    if isinstance(text, (list, tuple)):
        return tuple(int(v) for v in text)
    try:
        return tuple(int(v) for v in str(text).split(",") if v.strip())
    except ValueError:
        raise ValidationError(f"--n expects a comma-separated list of integers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lowreg", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a grid-refinement sweep")
    run.add_argument("--config", help="JSON file with default values for the flags below")
    run.add_argument("--case", choices=CASE_IDS, default=argparse.SUPPRESS)
    run.add_argument("--order", type=int, choices=(2, 4), default=argparse.SUPPRESS)
    run.add_argument("--method", choices=METHODS, default=argparse.SUPPRESS)
    run.add_argument("--n", default=argparse.SUPPRESS, help="comma-separated grid divisions")
    run.add_argument("--out", default=argparse.SUPPRESS, help="report path (stdout when omitted)")
    run.add_argument("--format", choices=("csv", "md"), default=argparse.SUPPRESS)
    run.add_argument(
        "--field-out", dest="field_out", default=argparse.SUPPRESS,
        help="write the nodal error field of the finest grid here",
    )
    run.add_argument(
        "--allow-fine", dest="allow_fine", action="store_true", default=argparse.SUPPRESS,
        help=f"permit 2-D grids finer than N={MAX_2D_N}",
    )

    modes = sub.add_parser("modes", help="mode utilities")
    modes_sub = modes.add_subparsers(dest="modes_command", required=True)
    check = modes_sub.add_parser("check", help="validate closed-form derivatives against finite differences")
    check.add_argument("--points", type=int, default=200)
    check.add_argument("--seed", type=int, default=0)

    oracle = sub.add_parser("oracle", help="compare the Schur route with the dense augmented-system oracle")
    oracle.add_argument("--case", choices=CASE_IDS, default=None, help="default: every case")
    oracle.add_argument("--order", type=int, choices=(2, 4), default=None, help="default: both orders")
    oracle.add_argument("--n", type=int, default=20)
    return parser


def resolve_run_options(args: argparse.Namespace) -> dict:
    opts = dict(RUN_DEFAULTS)
    if getattr(args, "config", None):
        try:
            with open(args.config) as fh:
                cfg = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ValidationError(f"cannot read config {args.config}: {exc}")
        unknown = set(cfg) - set(RUN_DEFAULTS)
        if unknown:
            raise ValidationError(f"unknown config keys: {sorted(unknown)}")
        opts.update(cfg)
    for key in RUN_DEFAULTS:
        if hasattr(args, key):
            opts[key] = getattr(args, key)
    if opts["n"] is None:
        opts["n"] = DEFAULT_N_2D if opts["case"].startswith("poisson2d") else DEFAULT_N_1D
    opts["n"] = _parse_n(opts["n"])
    if opts["case"].startswith("poisson2d") and max(opts["n"]) > MAX_2D_N and not opts["allow_fine"]:
        raise ValidationError(f"2-D runs above N={MAX_2D_N} need --allow-fine")
    return opts


def cmd_run(args) -> int:
    opts = resolve_run_options(args)
    try:
        config = ExperimentConfig(
            case_id=opts["case"],
            order=int(opts["order"]),
            method=opts["method"],
            n_list=opts["n"],
            output_path=opts["out"],
            output_format=opts["format"],
        )
    except ValueError as exc:
        raise ValidationError(str(exc))
    report = run_experiment(config)
    if config.output_path is None:
        sys.stdout.write(format_report(report, config.output_format))
    if opts["field_out"]:
        case = builtin_case(config.case_id, config.n_list[-1], config.order)
        u_full, _ = run_case(case, config.method)
        err = u_full - case.exact_solution(case.grid.coordinates())
        emit_field(case.grid, err, opts["field_out"])
    return EXIT_OK


def cmd_modes_check(args) -> int:
    results = mode_derivative_suite(args.points, args.seed)
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"{status}  {r.quantity:<18} rel.err {r.max_rel_error:.2e} (tol {r.tol:g})  {r.mode}")
    return EXIT_OK if all(r.passed for r in results) else EXIT_INVALID


def cmd_oracle(args) -> int:
    cases = [args.case] if args.case else list(CASE_IDS)
    orders = [args.order] if args.order else [2, 4]
    ok = True
    for case_id in cases:
        for order in orders:
            res = oracle_check(case_id, args.n, order)
            ok &= res.passed
            print(
                f"{'PASS' if res.passed else 'FAIL'}  {case_id} order {order} N={args.n}: "
                f"k={np.array2string(res.k_schur, precision=12)} |k - k_oracle| = {res.max_diff:.2e}"
            )
    return EXIT_OK if ok else EXIT_INVALID


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    handlers = {"run": cmd_run, "oracle": cmd_oracle}
    try:
        if args.command == "modes":
            return cmd_modes_check(args)
        return handlers[args.command](args)
    except ValidationError as exc:
        print(f"lowreg: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (LowRegError, np.linalg.LinAlgError, OSError) as exc:
        log.debug("runtime failure", exc_info=True)
        print(f"lowreg: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
