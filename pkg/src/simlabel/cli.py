"""Command-line interface.

Two subcommands: `eval` cross-validates a dataset and writes a metrics
report; `predict` fits on a training file and writes predicted label sets
for a test file. Errors print to stderr and exit nonzero.
"""

import argparse
import sys

from .data import FORMAT_CSV, FORMAT_SVM
from .harness import (
    AUTO_RBF,
    DECODER_SETSIZE,
    DECODER_THRESHOLD,
    ExperimentConfig,
    TuningPlan,
    run_experiment,
    run_predict,
)
from .scoring import SamplingConfig
from .similarity import POLYNOMIAL, RBF, SimilarityConfig


def build_parser():
    parser = argparse.ArgumentParser(
        prog="simlabel",
        description="Similarity-sum multi-label learning: evaluate or predict.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    ev = sub.add_parser("eval", help="cross-validate a dataset and report metrics")
    ev.add_argument("--data", required=True, help="dataset file")
    _add_shared(ev)
    ev.add_argument("--folds", type=int, default=10, help="cross-validation fold count")
    ev.add_argument("--out", required=True, help="report output path")
    ev.add_argument(
        "--out-format", choices=("json", "csv"), default="json", help="report format"
    )

    pr = sub.add_parser("predict", help="fit on a train file, predict a test file")
    pr.add_argument("--train", required=True, help="training dataset file")
    pr.add_argument("--test", required=True, help="test dataset file")
    _add_shared(pr)
    pr.add_argument("--out", required=True, help="predictions output path")
    pr.add_argument(
        "--verbose-scores",
        action="store_true",
        help="append per-label scores to each prediction line",
    )
    return parser


def _add_shared(sub):
    sub.add_argument(
        "--format",
        choices=(FORMAT_SVM, FORMAT_CSV),
        default=FORMAT_SVM,
        help="dataset file format",
    )
    sub.add_argument("--sim", choices=("rbf", "poly"), default="rbf", help="similarity kind")
    sub.add_argument(
        "--gamma",
        default="auto",
        help="RBF width, or 'auto' to tune by inner cross-validation",
    )
    sub.add_argument("--c", type=float, default=1.0, help="polynomial offset")
    sub.add_argument("--d", type=int, default=2, help="polynomial degree")
    sub.add_argument(
        "--decoder",
        choices=(DECODER_SETSIZE, DECODER_THRESHOLD),
        default=DECODER_SETSIZE,
        help="label-set decoder",
    )
    sub.add_argument(
        "--sample", type=float, default=None, help="training subsample fraction in (0, 1]"
    )
    sub.add_argument("--seed", type=int, default=42, help="random seed")
    sub.add_argument("--workers", type=int, default=1, help="scoring worker threads")


def _similarity_from_args(args):
    if args.sim == "poly":
        return SimilarityConfig(POLYNOMIAL, c=args.c, d=args.d)
    if args.gamma == "auto":
        return AUTO_RBF
    try:
        gamma = float(args.gamma)
    except ValueError:
        raise ValueError(f"--gamma must be 'auto' or a number, got {args.gamma!r}") from None
    return SimilarityConfig(RBF, gamma=gamma)


def _sampling_from_args(args):
    if args.sample is None:
        return None
    return SamplingConfig(args.sample, seed=args.seed)


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.command == "eval":
            config = ExperimentConfig(
                data_path=args.data,
                format=args.format,
                fold_count=args.folds,
                seed=args.seed,
                similarity=_similarity_from_args(args),
                decoder=args.decoder,
                sampling=_sampling_from_args(args),
                output_path=args.out,
                output_format=args.out_format,
                workers=args.workers,
                tuning=TuningPlan(),
            )
            run_experiment(config)
        else:
            run_predict(
                args.train,
                args.test,
                format=args.format,
                similarity=_similarity_from_args(args),
                decoder=args.decoder,
                sampling=_sampling_from_args(args),
                seed=args.seed,
                workers=args.workers,
                verbose_scores=args.verbose_scores,
                output_path=args.out,
            )
    except (ValueError, OSError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
