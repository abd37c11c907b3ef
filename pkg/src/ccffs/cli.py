"""Command-line entry point: ``ccffs select | bench | verify-iris``."""

import argparse
import json
import sys

from . import bench, iris
from .dataset import load_csv
from .exceptions import (
    CcffsError,
    EngineDisagreementError,
    NoInformativeCandidateError,
)
from .selector import resolve_mode, resolve_threads, run

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_DATA = 1
EXIT_DISAGREE = 2
EXIT_NO_CANDIDATE = 3
EXIT_MISMATCH = 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _positive_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return value


def _nonnegative_float(text):
    value = float(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"tolerance must be non-negative, got {text!r}")
    return value


def _method(text):
    try:
        resolve_mode(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    return text


def _engine_list(text):
    engines = [e.strip() for e in text.split(",") if e.strip()]
    if not engines:
        raise argparse.ArgumentTypeError("engine list is empty")
    for e in engines:
        if e not in ("definition", "h", "theta"):
            raise argparse.ArgumentTypeError(f"unknown engine {e!r}")
    return engines


def build_parser():
    parser = _Parser(prog="ccffs", description="Canonical-correlation feature selection.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sel = sub.add_parser("select", help="greedily select features from a CSV file")
    sel.add_argument("--data", required=True, help="CSV file with a header row")
    sel.add_argument("--target", required=True,
                     help="response column name(s), comma separated")
    sel.add_argument("--num-features", "-t", type=_positive_int, required=True)
    sel.add_argument("--method", type=_method, default="auto",
                     help="auto, definition, h or theta (default: auto)")
    sel.add_argument("--zscore", action="store_true", help="standardise features first")
    sel.add_argument("--output", "-o", help="write the JSON report here instead of stdout")
    sel.add_argument("--threads", type=_positive_int, default=None)

    ben = sub.add_parser("bench", help="time the three engines on synthetic data")
    ben.add_argument("--instances", "-N", type=_positive_int, default=5000)
    ben.add_argument("--features", "-n", type=_positive_int, default=700)
    ben.add_argument("--responses", "-m", type=_positive_int, default=50)
    ben.add_argument("--select", "-t", type=_positive_int, default=50)
    ben.add_argument("--seed", type=int, default=0)
    ben.add_argument("--engines", type=_engine_list, default=["definition", "h", "theta"])
    ben.add_argument("--repeat", type=_positive_int, default=1)
    ben.add_argument("--output", "-o", help="CSV destination")
    ben.add_argument("--threads", type=_positive_int, default=None)

    ver = sub.add_parser("verify-iris", help="replay the seven-sample iris walkthrough")
    ver.add_argument("--method", type=_method, default="auto")
    ver.add_argument("--tolerance", type=_nonnegative_float, default=iris.DEFAULT_TOL)
    return parser


def _fail(message, code):
    print(f"error: {' '.join(str(message).split())}", file=sys.stderr)
    return code


def cmd_select(args):
    targets = [t.strip() for t in args.target.split(",") if t.strip()]
    data = load_csv(args.data, targets, standardize=args.zscore)
    if args.num_features > data.n_features:
        raise ValueError(f"t exceeds feature count ({args.num_features} > {data.n_features})")
    report = run(data, args.num_features, args.method, threads=args.threads)
    payload = {"ccffs_schema": SCHEMA_VERSION, **report.to_dict(), "threads": report.threads}
    text = json.dumps(payload, indent=2) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_bench(args):
    if args.select > args.features:
        raise ValueError(f"t exceeds feature count ({args.select} > {args.features})")
    threads = args.threads
    records = bench.run_bench(args.instances, args.features, args.responses, args.select,
                              args.seed, args.engines, args.repeat, threads)
    if args.output:
        bench.emit_csv(records, args.output)
    print(f"N={args.instances} n={args.features} m={args.responses} t={args.select} "
          f"seed={args.seed} repeat={args.repeat} threads={threads}")
    print(f"{'engine':<12}{'total_seconds':>16}")
    for engine, seconds in bench.totals(records).items():
        print(f"{engine:<12}{seconds:>16.6f}")
    if {"h", "theta"} <= set(args.engines):
        cross = bench.crossover_iteration(records)
        print(f"theta faster than h from iteration: {cross if cross else 'never'}")
    return EXIT_OK


def cmd_verify_iris(args):
    checks = iris.verify(args.tolerance, args.method)
    for check in checks:
        print(check.line())
    failed = [c for c in checks if not c.passed]
    if failed:
        return _fail(f"{len(failed)} of {len(checks)} iris checks failed", EXIT_MISMATCH)
    print(f"all {len(checks)} checks passed")
    return EXIT_OK


COMMANDS = {"select": cmd_select, "bench": cmd_bench, "verify-iris": cmd_verify_iris}


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        return _fail(exc, EXIT_DATA)
    try:
        if hasattr(args, "threads"):
            args.threads = resolve_threads(args.threads)
        return COMMANDS[args.command](args)
    except EngineDisagreementError as exc:
        return _fail(exc, EXIT_DISAGREE)
    except NoInformativeCandidateError as exc:
        return _fail(exc, EXIT_NO_CANDIDATE)
    except (CcffsError, ValueError, OSError) as exc:
        return _fail(exc, EXIT_DATA)


if __name__ == "__main__":
    sys.exit(main())
