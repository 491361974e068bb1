"""Command line front end: analyze, range, power, verify, hunt.

Exit codes: 0 success, 1 usage or input problems, 2 numerical failure or
verify violations, 3 hunt confirmed a counterexample.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from typing import Dict, List, Optional, Sequence

from . import constants
from .errors import InvalidMatrix, NumRadiusError
from .frac_power import QuadratureOptions, fractional_power
from .generators import KIND_ALIASES, GeneratorKind, GeneratorSpec
from .hunt import HuntConfig, hunt_counterexample
from .matrix_core import load_matrix, matrix_digest, matrix_to_json
from .properties import NATURAL_CLASS, PropertyId
from .range_radius import (
    classify,
    export_boundary_csv,
    numerical_radius,
    range_boundary,
)
from .suite import SuiteConfig, run_suite

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERIC = 2
EXIT_COUNTEREXAMPLE = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _write_text(text: str, out: Optional[str]) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
        return
    os.makedirs(os.path.dirname(out) or ".", exist_ok=True)
    with open(out, "w", encoding="utf-8") as f:
        f.write(text)


def _emit(doc: Dict[str, object], out: Optional[str]) -> None:
    _write_text(json.dumps(doc, indent=2) + "\n", out)


def cmd_analyze(args) -> int:
    A = load_matrix(args.input)
    radius = numerical_radius(A, grid=args.grid)
    sector = classify(A, m=args.m)
    doc = {
        "n": int(A.shape[0]),
        "digest": matrix_digest(A),
        "sector": sector.to_dict(),
        "radius": radius.to_dict(),
    }
    _emit(doc, args.out)
    return EXIT_OK


def cmd_range(args) -> int:
    A = load_matrix(args.input)
    points = range_boundary(A, args.m)
    if args.format == "csv":
        export_boundary_csv(points, "-" if args.out is None else args.out)
        return EXIT_OK
    doc = {
        "n": int(A.shape[0]),
        "points": [
            {"theta": p.theta, "re": p.z.real, "im": p.z.imag} for p in points
        ],
    }
    _emit(doc, args.out)
    return EXIT_OK


def cmd_power(args) -> int:
    A = load_matrix(args.input)
    opts = QuadratureOptions(target_tol=args.tol)
    result = fractional_power(A, args.t, opts=opts, method=args.method)
    if result.discrepancy is not None:
        logger.info("spectral/quadrature discrepancy %.3e", result.discrepancy)
    doc = matrix_to_json(result.value)
    doc["power"] = result.to_dict()
    _emit(doc, args.out)
    return EXIT_OK


def _pids(raw: Optional[List[str]]) -> List[PropertyId]:
    if not raw:
        return list(PropertyId)
    return [PropertyId(p.upper()) for p in raw]


def _templates(args, pids: Sequence[PropertyId]) -> List[GeneratorSpec]:
    if args.kinds:
        kinds = [KIND_ALIASES[k] for k in args.kinds]
    else:
        kinds = [NATURAL_CLASS[p] for p in pids]
    root = max([k for k in args.k if k >= 2], default=2)
    templates = []
    for kind in dict.fromkeys(kinds):
        if kind is GeneratorKind.SECTORIAL and args.alpha is None:
            raise ValueError("--class sectorial needs --alpha")
        templates.append(
            GeneratorSpec(
                kind=kind,
                n=1,
                alpha=args.alpha if kind is GeneratorKind.SECTORIAL else None,
                root=root,
            )
        )
    return templates


def cmd_verify(args) -> int:
    pids = _pids(args.pids)
    config = SuiteConfig(
        templates=tuple(_templates(args, pids)),
        pids=tuple(pids),
        samples=args.samples,
        t_grid=tuple(args.t or constants.DEFAULT_T_GRID),
        k_set=tuple(args.k),
        theta_set=tuple(args.theta or constants.DEFAULT_THETA_SET),
        n_min=args.n_min,
        n_max=args.n_max,
        tol=args.tol,
        seed=args.seed,
        jobs=args.jobs,
    )
    report = run_suite(config)
    _emit(report.to_dict(), args.out)
    if report.total_violations:
        logger.error("%d violations counted", report.total_violations)
        return EXIT_NUMERIC
    return EXIT_OK


def cmd_hunt(args) -> int:
    kind = KIND_ALIASES[args.kind]
    config = HuntConfig(
        n_min=args.n_min,
        n_max=args.n_max,
        t_min=args.t_min,
        t_max=args.t_max,
        budget=args.budget,
        seed=args.seed,
        perturb_scale=args.perturb_scale,
        kind=kind,
        flag_threshold=args.tol,
        grid=args.grid,
    )
    report = hunt_counterexample(config)
    _emit(report.to_dict(), args.out)
    if report.counterexample:
        logger.error("COUNTEREXAMPLE confirmed")
        return EXIT_COUNTEREXAMPLE
    return EXIT_OK


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer: {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "-v", "--verbose", action="count", default=0, help="More logging"
    )
    common.add_argument(
        "-q", "--quiet", action="store_true", help="Errors only"
    )
    common.add_argument("--out", default=None, help="Output path, '-' = stdout")

    p = _Parser(
        prog="numradius",
        description="Numerical range, numerical radius and fractional power "
        "inequalities of complex matrices.",
    )
    sub = p.add_subparsers(dest="command", metavar="command")
    sub.required = True

    a = sub.add_parser(
        "analyze", parents=[common], help="Radius and sector report"
    )
    a.add_argument("--input", required=True, help="Matrix JSON file")
    a.add_argument("--grid", type=_positive_int, default=constants.THETA_GRID)
    a.add_argument(
        "--m",
        type=_positive_int,
        default=constants.CLASSIFY_POINTS,
        help="Boundary points for the hull tests",
    )
    a.set_defaults(func=cmd_analyze)

    r = sub.add_parser(
        "range", parents=[common], help="Boundary points of W(A)"
    )
    r.add_argument("--input", required=True, help="Matrix JSON file")
    r.add_argument("--m", type=_positive_int, default=256)
    r.add_argument("--format", choices=("csv", "json"), default="csv")
    r.set_defaults(func=cmd_range)

    w = sub.add_parser(
        "power", parents=[common], help="Principal fractional power A^t"
    )
    w.add_argument("--input", required=True, help="Matrix JSON file")
    w.add_argument("--t", type=float, required=True)
    w.add_argument(
        "--method",
        choices=("auto", "spectral", "quadrature", "both"),
        default="auto",
    )
    w.add_argument(
        "--tol",
        type=float,
        default=constants.QUAD_TARGET_TOL,
        help="Quadrature target tolerance relative to ||A||^t",
    )
    w.set_defaults(func=cmd_power)

    v = sub.add_parser(
        "verify", parents=[common], help="Check the inequality catalogue"
    )
    v.add_argument(
        "--class",
        dest="kinds",
        action="append",
        choices=sorted(KIND_ALIASES),
        help="Generator class (repeatable)",
    )
    v.add_argument("--alpha", type=float, default=None)
    v.add_argument("--pid", dest="pids", action="append")
    v.add_argument("--samples", type=int, default=100)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--t", type=float, action="append", help="t-grid value")
    v.add_argument(
        "--k", type=_positive_int, action="append", help="integer power"
    )
    v.add_argument("--theta", type=float, action="append")
    v.add_argument("--n-min", type=_positive_int, default=1)
    v.add_argument("--n-max", type=_positive_int, default=8)
    v.add_argument("--tol", type=float, default=constants.VIOLATION_TOL)
    v.add_argument("--jobs", type=_positive_int, default=1)
    v.set_defaults(func=cmd_verify)

    h = sub.add_parser(
        "hunt", parents=[common], help="Search for omega(A^t) < omega^t(A)"
    )
    h.add_argument(
        "--class",
        dest="kind",
        choices=("accretive", "ad"),
        default="accretive",
    )
    h.add_argument("--n-min", type=_positive_int, default=2)
    h.add_argument("--n-max", type=_positive_int, default=6)
    h.add_argument("--t-min", type=float, default=0.5)
    h.add_argument("--t-max", type=float, default=0.95)
    h.add_argument("--budget", type=_positive_int, default=10_000)
    h.add_argument("--seed", type=int, default=1)
    h.add_argument("--perturb-scale", type=float, default=0.1)
    h.add_argument(
        "--grid",
        type=_positive_int,
        default=constants.THETA_GRID,
        help="Theta grid for the margin evaluations",
    )
    h.add_argument(
        "--tol",
        type=float,
        default=constants.HUNT_FLAG_THRESHOLD,
        help="Margins below -tol are rechecked as candidates",
    )
    h.set_defaults(func=cmd_hunt)
    return p


def _setup_logging(args) -> None:
    if args.quiet:
        level = logging.ERROR
    else:
        level = max(logging.DEBUG, logging.WARNING - 10 * args.verbose)
    logging.basicConfig(
        level=level,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
        force=True,
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    if getattr(args, "k", None) is None:
        args.k = list(constants.DEFAULT_K_SET)
    _setup_logging(args)
    try:
        return args.func(args)
    except InvalidMatrix as e:
        logger.error("%s", e)
        return EXIT_USAGE
    except NumRadiusError as e:
        logger.error("%s", e)
        return EXIT_NUMERIC
    except (OSError, ValueError) as e:
        logger.error("%s", e)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
