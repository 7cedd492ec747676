"""movepat command line.

    movepat discretize --input gps.csv --output sequences.jsonl
    movepat mine --algo lccspm --input sequences.jsonl --output patterns.csv
    movepat pipeline --config run.json
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from collections.abc import Sequence
from pathlib import Path

import pandas as pd

from movepat._version import __version__
from movepat.alphabet import BandThresholds
from movepat.analysis import compare, overlap_rows, union_patterns
from movepat.config import load_config, load_synth_config, load_thresholds, resolve_output_dir, resolve_threads
from movepat.exceptions import MovepatError
from movepat.features import featurize, read_matrix, write_matrix
from movepat.ingest import (
    InactiveConfig,
    discretize_streams,
    read_observations,
    read_tracking_csv,
    write_observations,
    write_tracking_csv,
)
from movepat.mining import attach_observations, mine_observations, read_patterns, write_patterns
from movepat.pipeline import run_pipeline
from movepat.synth import generate_cohort, realize_streams
from movepat.types import Algorithm, ClusteringConfig, CvConfig, MinerConfig, ModelName
from movepat.validation import cross_validate, importance_for_matrix

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(levelname)s %(name)s: %(message)s"
_handler: logging.Handler | None = None


def configure_logging(verbose: bool = False, quiet: bool = False) -> None:
    """Send movepat logs to stderr: DEBUG with -v, WARNING with -q, INFO otherwise."""
    global _handler
    package_logger = logging.getLogger("movepat")
    if _handler is not None:
        package_logger.removeHandler(_handler)
    _handler = logging.StreamHandler(sys.stderr)
    _handler.setFormatter(logging.Formatter(LOG_FORMAT))
    package_logger.addHandler(_handler)
    package_logger.setLevel(logging.DEBUG if verbose else logging.WARNING if quiet else logging.INFO)


def _write_json(payload: object, path: str | Path) -> None:
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")


# =============================================================================
# Subcommands
# =============================================================================


def _discretize(args: argparse.Namespace) -> None:
    thresholds = load_thresholds(args.thresholds) if args.thresholds else BandThresholds()
    inactive = InactiveConfig(v_min=args.inactive_vel, min_dur=args.inactive_dur, min_segment_length=args.min_segment)
    observations = discretize_streams(read_tracking_csv(args.input), thresholds, inactive, args.threads)
    write_observations(observations, args.output)
    logger.info(f"wrote {len(observations)} observations to {args.output}")


def _mine(args: argparse.Namespace) -> None:
    algorithm = Algorithm(args.algo)
    miner = MinerConfig(min_support=args.support, max_len=args.maxlen)
    clustering = ClusteringConfig(k=args.clusters, max_len=args.maxlen)
    mined = mine_observations(read_observations(args.input), algorithm, miner, clustering, args.threads)
    write_patterns(mined, args.output)


def _compare(args: argparse.Namespace) -> None:
    mined_a, mined_b = read_patterns(args.a), read_patterns(args.b)
    with_positions = args.sequences is not None
    if with_positions:
        observations = read_observations(args.sequences)
        mined_a = attach_observations(mined_a, observations)
        mined_b = attach_observations(mined_b, observations)
    report = compare(mined_a, mined_b, top=args.top, with_positions=with_positions)
    _write_json(report, args.output)
    if args.plot_csv:
        pd.DataFrame(overlap_rows(report), columns=["end", "pattern", "freq_a", "freq_b"]).to_csv(
            args.plot_csv, index=False
        )


def _featurize(args: argparse.Namespace) -> None:
    mined = attach_observations(read_patterns(args.patterns), read_observations(args.sequences))
    write_matrix(featurize(union_patterns(mined), mined), args.output)


def _classify(args: argparse.Namespace) -> None:
    matrix = read_matrix(args.matrix)
    cfg = CvConfig(n_splits=args.folds, shuffle=not args.no_shuffle, seed=args.seed)
    report = cross_validate(ModelName(args.model), matrix, cfg, algorithm=Path(args.matrix).stem, threads=args.threads)
    payload = report.model_dump(mode="json")
    if args.importance:
        payload["importance"] = importance_for_matrix(matrix, args.importance).model_dump(mode="json")["entries"]
    _write_json(payload, args.report)


def _synth(args: argparse.Namespace) -> None:
    cfg = load_synth_config(args.config)
    if args.seed is not None:
        cfg = cfg.model_copy(update={"seed": args.seed})
    cohort = generate_cohort(cfg, args.threads)
    write_observations(cohort, args.out_sequences)
    if args.out_gps:
        write_tracking_csv(realize_streams(cohort, seed=cfg.seed), args.out_gps)


def _pipeline(args: argparse.Namespace) -> None:
    cfg = load_config(args.config)
    update: dict[str, object] = {"threads": args.threads} if args.threads_given else {}
    if args.output_dir:
        update["output_dir"] = resolve_output_dir(args.output_dir)
    if args.seed is not None:
        update["seed"] = args.seed
    run_pipeline(cfg.model_copy(update=update))


# =============================================================================
# Parser
# =============================================================================


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--threads", type=_positive_int, default=None, help="worker cap (default: $MOVEPAT_THREADS or 1)")
    noise = common.add_mutually_exclusive_group()
    noise.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    noise.add_argument("-q", "--quiet", action="store_true", help="warnings and errors only")

    parser = argparse.ArgumentParser(prog="movepat", description="Movement-pattern mining on player tracking data.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = commands.add_parser("discretize", parents=[common], help="tracking CSV -> movement sequences JSONL")
    p.add_argument("--input", required=True, help="tracking CSV")
    p.add_argument("--output", required=True, help="sequences JSONL")
    p.add_argument("--inactive-vel", type=float, default=0.1, help="inactive velocity bound in m/s (default 0.1)")
    p.add_argument("--inactive-dur", type=float, default=2.0, help="minimum inactive duration in s (default 2.0)")
    p.add_argument("--min-segment", type=_positive_int, default=2, help="shortest kept sequence (default 2)")
    p.add_argument("--thresholds", help="JSON band-threshold override")
    p.set_defaults(handler=_discretize)

    p = commands.add_parser("mine", parents=[common], help="sequences JSONL -> pattern CSV")
    p.add_argument("--algo", required=True, choices=[a.value for a in Algorithm])
    p.add_argument("--input", required=True, help="sequences JSONL")
    p.add_argument("--output", required=True, help="pattern CSV")
    p.add_argument("--support", type=float, default=0.05, help="minimum support fraction (default 0.05)")
    p.add_argument("--maxlen", type=_positive_int, default=20, help="maximum pattern length (default 20)")
    p.add_argument("--clusters", type=_positive_int, default=25, help="smp-lcs cluster count (default 25)")
    p.set_defaults(handler=_mine)

    p = commands.add_parser("compare", parents=[common], help="compare two pattern CSVs")
    p.add_argument("--a", required=True, help="pattern CSV of the first algorithm")
    p.add_argument("--b", required=True, help="pattern CSV of the second algorithm")
    p.add_argument("--top", type=_positive_int, default=50, help="k of the most/least frequent overlap (default 50)")
    p.add_argument("--output", required=True, help="JSON report")
    p.add_argument("--sequences", help="sequences JSONL, enables the per-position breakdown")
    p.add_argument("--plot-csv", help="also write overlap frequencies as CSV")
    p.set_defaults(handler=_compare)

    p = commands.add_parser("featurize", parents=[common], help="pattern CSV + sequences -> binary matrix CSV")
    p.add_argument("--patterns", required=True, help="pattern CSV")
    p.add_argument("--sequences", required=True, help="sequences JSONL")
    p.add_argument("--output", required=True, help="matrix CSV")
    p.set_defaults(handler=_featurize)

    p = commands.add_parser("classify", parents=[common], help="cross-validate one model on a matrix CSV")
    p.add_argument("--matrix", required=True, help="matrix CSV")
    p.add_argument("--model", required=True, choices=[m.value for m in ModelName])
    p.add_argument("--folds", type=_positive_int, default=10, help="number of folds (default 10)")
    p.add_argument("--seed", type=int, default=10, help="shuffle seed (default 10)")
    p.add_argument("--no-shuffle", action="store_true", help="keep row order when splitting")
    p.add_argument("--report", required=True, help="JSON report")
    p.add_argument("--importance", type=int, default=0, help="add the top-k logistic-regression patterns")
    p.set_defaults(handler=_classify)

    p = commands.add_parser("synth", parents=[common], help="generate a synthetic cohort")
    p.add_argument("--config", required=True, help="JSON or YAML SynthConfig")
    p.add_argument("--out-sequences", required=True, help="sequences JSONL")
    p.add_argument("--out-gps", help="also write matching 10 Hz tracking CSV")
    p.add_argument("--seed", type=int, default=None, help="override the config seed")
    p.set_defaults(handler=_synth)

    p = commands.add_parser("pipeline", parents=[common], help="run every stage end to end")
    p.add_argument("--config", required=True, help="JSON or YAML PipelineConfig")
    p.add_argument("--output-dir", help="output directory (default: config, $MOVEPAT_OUTPUT_DIR, movepat-out)")
    p.add_argument("--seed", type=int, default=None, help="override the synthetic cohort seed")
    p.set_defaults(handler=_pipeline)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    """Entry point; returns the process exit code. Usage errors exit with 2 via argparse."""
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose, args.quiet)
    try:
        args.threads_given = args.threads is not None
        args.threads = resolve_threads(args.threads)
        args.handler(args)
    except (MovepatError, OSError, ValueError) as exc:
        print(f"movepat {args.command}: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
