"""Command-line entry point.

Subcommands drive the library directly (rank, sweep, validate) or start
the HTTP service (serve). Exit codes: 0 success, 1 usage error, 2 data
error, 3 internal error.

The dataset defaults to the bundled demo; override with a positional path
or the VMRANK_DATASET environment variable.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__
from .errors import VmRankError
from .fixtures import demo_measurements_path
from .ingest import Aggregation, load_measurements_path, load_timings_path
from .model import CorrelationMethod, MeasurementSet, Mode, WeightVector
from .render import FORMATS, render_comparison, render_rank_table, render_sweep
from .scoring import ScoringContext
from .sweep import top_k_frequency
from .validation import compare, divergence_report, rank_empirical

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_INTERNAL = 3

DATASET_ENV = "VMRANK_DATASET"

_METHODS = {
    "pearson": CorrelationMethod.PEARSON_ON_RANKS,
    "spearman": CorrelationMethod.SPEARMAN_AVERAGE_RANKS,
    "kendall": CorrelationMethod.KENDALL_TAU,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{message}\n{self.format_usage().rstrip()}")


def _dataset_path(args) -> Path:
    if args.data:
        return Path(args.data)
    env = os.environ.get(DATASET_ENV)
    if env:
        return Path(env)
    return demo_measurements_path()


def _load_dataset(args) -> MeasurementSet:
    return load_measurements_path(_dataset_path(args))


def _parse_weights(text: str) -> WeightVector:
    try:
        return WeightVector.parse(text)
    except ValueError as exc:
        raise UsageError(f"invalid --weights: {exc}") from None


def _add_common(sub, with_weights: bool):
    sub.add_argument("data", nargs="?", default=None,
                     help="measurement file (default: bundled demo dataset,"
                          f" or ${DATASET_ENV})")
    if with_weights:
        sub.add_argument("--weights", required=True, metavar="W1,W2,W3,W4",
                         help="group weights 0-5: memory_process,"
                              " local_communication, computation, storage")
    sub.add_argument("--mode", choices=[m.value for m in Mode],
                     default=Mode.SEQUENTIAL.value)
    sub.add_argument("--format", choices=FORMATS, default="table")
    sub.add_argument("--aggregation", choices=[a.value for a in Aggregation],
                     default=Aggregation.MEDIAN.value,
                     help="how repeated observations collapse (default: median)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="vmrank",
                     description="Rank cloud VM types by expected application"
                                 " performance from micro-benchmark data.")
    parser.add_argument("--version", action="version", version=f"vmrank {__version__}")
    subs = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p_rank = subs.add_parser("rank", help="rank VMs for a weight vector")
    _add_common(p_rank, with_weights=True)
    p_rank.set_defaults(func=cmd_rank)

    p_sweep = subs.add_parser("sweep", help="sweep all 1295 weight vectors")
    _add_common(p_sweep, with_weights=False)
    p_sweep.add_argument("--top", type=int, default=3, metavar="K",
                         help="count appearances at ranks 1..K (default 3)")
    p_sweep.set_defaults(func=cmd_sweep)

    p_val = subs.add_parser("validate",
                            help="compare a benchmark ranking against timings")
    _add_common(p_val, with_weights=True)
    p_val.add_argument("--timings", required=True, help="timing file")
    p_val.add_argument("--method", choices=sorted(_METHODS), default="pearson")
    p_val.add_argument("--top", type=int, default=3, metavar="K",
                       help="top-K overlap to report (default 3)")
    p_val.add_argument("--threshold", type=int, default=3,
                       help="flag VMs with |rank delta| above this (default 3)")
    p_val.set_defaults(func=cmd_validate)

    p_serve = subs.add_parser("serve", help="start the HTTP service")
    p_serve.add_argument("data", nargs="?", default=None,
                         help="measurement file (default: bundled demo dataset)")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.add_argument("--ui-dist", default=None,
                         help="directory with the built web UI to serve at /")
    p_serve.set_defaults(func=cmd_serve)
    return parser


def cmd_rank(args) -> int:
    weights = _parse_weights(args.weights)
    mset = _load_dataset(args)
    ctx = ScoringContext.prepare(mset, Mode(args.mode), Aggregation(args.aggregation))
    table = ctx.rank_table(weights)
    print(render_rank_table(table, args.format))
    return EXIT_OK


def cmd_sweep(args) -> int:
    if args.top < 1:
        raise UsageError(f"--top must be >= 1, got {args.top}")
    mset = _load_dataset(args)
    result = top_k_frequency(mset, args.top, Mode(args.mode),
                             Aggregation(args.aggregation))
    print(render_sweep(result, args.format))
    return EXIT_OK


def cmd_validate(args) -> int:
    weights = _parse_weights(args.weights)
    if args.top < 1:
        raise UsageError(f"--top must be >= 1, got {args.top}")
    if args.threshold < 0:
        raise UsageError(f"--threshold must be >= 0, got {args.threshold}")
    mset = _load_dataset(args)
    mode = Mode(args.mode)
    timings = load_timings_path(args.timings, known_vms=mset.vm_ids)
    ctx = ScoringContext.prepare(mset, mode, Aggregation(args.aggregation))
    benchmark = ctx.rank_table(weights)
    empirical = rank_empirical(timings, mode)
    report = compare(benchmark, empirical, _METHODS[args.method], k=args.top)
    divergence = divergence_report(benchmark, empirical, threshold=args.threshold,
                                   group_scores=ctx.groups)
    print(render_comparison(report, benchmark, empirical, divergence, args.format))
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .api import build_snapshot, create_app

    path = _dataset_path(args)
    snapshot = build_snapshot(load_measurements_path(path))
    app = create_app(snapshot, ui_dist=args.ui_dist)
    print(f"dataset: {path} ({len(snapshot.measurements.vms)} VMs)", file=sys.stderr)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return EXIT_OK


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"vmrank: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"vmrank: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (VmRankError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"vmrank: {exc}", file=sys.stderr)
        return EXIT_DATA
    except KeyboardInterrupt:
        return EXIT_OK
    except Exception as exc:  # pragma: no cover - defensive
        print(f"vmrank: internal error: {exc!r}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
