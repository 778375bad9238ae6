"""Command-line front end.

Exit codes: 0 success, 1 a verification check failed, 2 bad input or usage.
"""

import argparse
import os
import sys

from . import report
from .errors import ChainError, DegenerateU, Singular
from .specfile import BUILTINS, builtin, dump_spec, load_spec

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {text}")
    return value


def _positive_float(text):
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return value


def _seed(text):
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def build_parser():
    parser = _Parser(prog="kemeny-mrp", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p):
        p.add_argument("path", help="spec file (JSON), or @name for a built-in example")
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--tol", type=_positive_float, help="row-sum validation tolerance")

    p = sub.add_parser("analyze", help="stationary vectors, M and Kemeny functions")
    common(p)
    p.add_argument("--route", choices=report.ROUTES, default="direct", help="how M is computed")

    p = sub.add_parser("verify", help="run the invariant battery")
    common(p)
    p.add_argument("--check-tol", type=_positive_float, help="override every check tolerance")

    p = sub.add_parser("simulate", help="Monte Carlo estimates beside analytic values")
    common(p)
    p.add_argument("--trials", type=_positive_int, default=100_000)
    p.add_argument("--steps", type=_positive_int, default=1_000_000, help="embedded-chain steps")
    p.add_argument("--horizon", type=_positive_float, default=100_000.0)
    p.add_argument("--seed", type=_seed, default=None)
    p.add_argument("--model", choices=("exponential", "deterministic", "two_point"))

    p = sub.add_parser("example", help="print a built-in spec file")
    p.add_argument("name")
    return parser


def _load(args):
    if args.path.startswith("@"):
        name = args.path[1:]
        if name not in BUILTINS:
            raise ChainError(f"unknown built-in {name!r}; choose from {', '.join(BUILTINS)}")
        return builtin(name, args.tol)
    return load_spec(args.path, args.tol)


def _emit(rep, fmt, out):
    if fmt == "json":
        out.write(report.to_json(rep))
    else:
        color = out.isatty() and "NO_COLOR" not in os.environ
        out.write(report.to_text(rep, color=color))


def _fail(path, exc, err):
    line = getattr(exc, "line", None)
    where = f"{path}:{line}" if line else str(path)
    err.write(f"{where}: {type(exc).__name__}: {exc}\n")
    return EXIT_INPUT


def main(argv=None, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)

    if args.command == "example":
        if args.name not in BUILTINS:
            err.write(f"unknown example {args.name!r}; available: {', '.join(BUILTINS)}\n")
            return EXIT_INPUT
        out.write(dump_spec(BUILTINS[args.name]))
        return EXIT_OK

    try:
        sf = _load(args)
    except (ChainError, OSError, ValueError) as exc:
        return _fail(args.path, exc, err)

    try:
        if args.command == "analyze":
            rep = report.analyze(sf, args.route)
        elif args.command == "verify":
            rep = report.verify(sf, args.check_tol)
        else:
            seed = args.seed if args.seed is not None else (sf.seed if sf.seed is not None else 0)
            rep = report.simulate_report(sf, args.trials, args.horizon, seed, args.steps, args.model)
    except report.UsageError as exc:
        return _fail(args.path, exc, err)
    except (Singular, DegenerateU) as exc:
        return _fail(args.path, exc, err)

    _emit(rep, args.format, out)
    if args.command == "verify" and not rep["passed"]:
        return EXIT_FAIL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
