"""Experiment orchestration: k-fold cross-validation, automatic RBF width
tuning, report emission and batch prediction.

Everything is seeded and single-ordered, so a fixed config yields a
byte-identical report; worker threads only parallelize batch scoring.
"""

import json
from dataclasses import asdict, dataclass

import numpy as np

from .data import FORMAT_CSV, FORMAT_SVM, load_dataset, split_folds
from .decoding import (
    compute_s_target,
    decode_threshold,
    decode_topk,
    fit_size_model,
    fit_threshold,
    predict_sizes,
)
from .metrics import METRIC_NAMES, aggregate_folds, compute_fold_metrics
from .scoring import SamplingConfig, fit, sample_training
from .similarity import RBF, SimilarityConfig

AUTO_RBF = "auto-rbf"
DECODER_SETSIZE = "setsize"
DECODER_THRESHOLD = "threshold"
DEFAULT_GAMMA_GRID = (0.01, 0.1, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0)


@dataclass(frozen=True)
class TuningPlan:
    """Inner-CV grid search for the RBF width on a fraction of the data."""

    gamma_grid: tuple = DEFAULT_GAMMA_GRID
    inner_folds: int = 5
    tuning_fraction: float = 0.10
    criterion: str = "average_precision"

    def __post_init__(self):
        if not self.gamma_grid or any(not g > 0 for g in self.gamma_grid):
            raise ValueError("gamma grid must be non-empty and positive")
        if self.inner_folds < 2:
            raise ValueError(f"inner_folds must be >= 2, got {self.inner_folds}")
        if not 0 < self.tuning_fraction <= 1:
            raise ValueError(f"tuning fraction must be in (0, 1], got {self.tuning_fraction}")
        if self.criterion not in METRIC_NAMES:
            raise ValueError(f"unknown criterion {self.criterion!r}")


@dataclass(frozen=True)
class ExperimentConfig:
    """One cross-validation experiment, fully determined by its fields."""

    data_path: str
    format: str = FORMAT_SVM
    fold_count: int = 10
    seed: int = 42
    similarity: object = AUTO_RBF  # SimilarityConfig or the AUTO_RBF sentinel
    decoder: str = DECODER_SETSIZE
    sampling: SamplingConfig | None = None
    output_path: str | None = None
    output_format: str = "json"
    workers: int = 1
    tuning: TuningPlan = TuningPlan()

    def __post_init__(self):
        if self.format not in (FORMAT_SVM, FORMAT_CSV):
            raise ValueError(f"unknown dataset format {self.format!r}")
        if self.fold_count < 2:
            raise ValueError(f"fold_count must be >= 2, got {self.fold_count}")
        if self.similarity != AUTO_RBF and not isinstance(self.similarity, SimilarityConfig):
            raise ValueError("similarity must be a SimilarityConfig or 'auto-rbf'")
        if self.decoder not in (DECODER_SETSIZE, DECODER_THRESHOLD):
            raise ValueError(f"unknown decoder {self.decoder!r}")
        if self.output_format not in ("json", "csv"):
            raise ValueError(f"unknown output format {self.output_format!r}")
        if self.workers < 1:
            raise ValueError(f"workers must be >= 1, got {self.workers}")


def tune_gamma(training, plan, seed):
    """Pick the RBF width with the best inner-CV criterion on a sampled
    tuning subset; ties go to the smaller width."""
    subset = sample_training(training, plan.tuning_fraction, _child_seed(seed, 0))
    if subset.n < plan.inner_folds:
        raise ValueError(
            f"tuning subset has {subset.n} instances, need at least {plan.inner_folds}"
        )
    inner = split_folds(subset, plan.inner_folds, _child_seed(seed, 1))
    higher_is_better = plan.criterion == "average_precision"
    best_gamma = None
    best_value = None
    for gamma in sorted(plan.gamma_grid):
        values = []
        for f in range(plan.inner_folds):
            train = subset.subset(inner.train_ids(f))
            test_ids = inner.test_ids(f)
            sim = SimilarityConfig(RBF, gamma=gamma)
            model = fit(train, sim)
            scores = model.score_batch(subset.features[test_ids])
            sizes = predict_sizes(fit_size_model(train, sim), subset.features[test_ids])
            preds = [decode_topk(s, int(sz)) for s, sz in zip(scores, sizes)]
            truths = [subset.label_sets[i] for i in test_ids]
            fold = compute_fold_metrics(scores, preds, truths, subset.K)
            values.append(getattr(fold, plan.criterion))
        value = float(np.mean(values))
        if best_value is None or (value > best_value if higher_is_better else value < best_value):
            best_gamma, best_value = gamma, value
    return float(best_gamma)


def run_experiment(config):
    """Cross-validate per the config and return the aggregated report.

    Per outer fold: tune the RBF width on that fold's training portion when
    requested, fit the scorer and decoder, score the held-out instances,
    decode, and evaluate all five criteria.
    """
    data = load_dataset(config.data_path, config.format)
    plan = split_folds(data, config.fold_count, config.seed)
    records = []
    for f in range(config.fold_count):
        try:
            records.append(_run_fold(config, data, plan, f))
        except Exception as exc:
            raise RuntimeError(f"fold {f} failed: {exc}") from exc
    report = aggregate_folds(records)
    if config.output_path is not None:
        emit_report(report, config.output_path, config.output_format, config=config)
    return report


def _run_fold(config, data, plan, fold):
    train = data.subset(plan.train_ids(fold))
    test_ids = plan.test_ids(fold)
    sim = config.similarity
    if sim == AUTO_RBF:
        gamma = tune_gamma(train, config.tuning, _child_seed(config.seed, 2, fold))
        sim = SimilarityConfig(RBF, gamma=gamma)
    model = fit(train, sim, config.sampling)
    test_features = data.features[test_ids]
    scores = model.score_batch(test_features, workers=config.workers)
    preds = _decode_batch(config.decoder, model, scores, test_features, config.workers)
    truths = [data.label_sets[i] for i in test_ids]
    return compute_fold_metrics(scores, preds, truths, data.K)


def _decode_batch(decoder, model, scores, test_features, workers=1):
    if decoder == DECODER_SETSIZE:
        size_model = fit_size_model(model.training, model.similarity)
        sizes = predict_sizes(size_model, test_features, workers=workers)
        return [decode_topk(s, int(sz)) for s, sz in zip(scores, sizes)]
    train_rows = model.score_batch(model.training.features, workers=workers)
    targets = [
        compute_s_target(row, labels)
        for row, labels in zip(train_rows, model.training.label_sets)
    ]
    threshold_model = fit_threshold(train_rows, targets)
    return [decode_threshold(s, threshold_model) for s in scores]


def emit_report(report, path, format="json", config=None):
    """Serialize a report; floats carry six decimal places."""
    if format == "json":
        payload = {
            "config": _config_echo(config),
            **{
                name: {
                    "mean": _round6(getattr(report, name).mean),
                    "std": _round6(getattr(report, name).std),
                }
                for name in METRIC_NAMES
            },
            "folds": {
                name: [_round6(getattr(f, name)) for f in report.folds]
                for name in METRIC_NAMES
            },
        }
        text = json.dumps(payload, indent=2) + "\n"
    elif format == "csv":
        lines = ["fold," + ",".join(METRIC_NAMES)]
        for i, f in enumerate(report.folds, 1):
            lines.append(f"{i}," + ",".join(f"{getattr(f, n):.6f}" for n in METRIC_NAMES))
        lines.append("mean," + ",".join(f"{getattr(report, n).mean:.6f}" for n in METRIC_NAMES))
        lines.append("std," + ",".join(f"{getattr(report, n).std:.6f}" for n in METRIC_NAMES))
        text = "\n".join(lines) + "\n"
    else:
        raise ValueError(f"unknown output format {format!r}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def run_predict(
    train_path,
    test_path,
    format=FORMAT_SVM,
    similarity=AUTO_RBF,
    decoder=DECODER_SETSIZE,
    sampling=None,
    seed=42,
    tuning=None,
    workers=1,
    verbose_scores=False,
    output_path=None,
):
    """Fit on the training file, predict label sets for the test file.

    Returns the output lines: ascending comma-separated label ids, plus the
    K scores (six decimals, tab-separated field) when verbose_scores is set.
    The test file must match the training feature dimension.
    """
    train = load_dataset(train_path, format)
    if format == FORMAT_SVM:
        test = load_dataset(test_path, format, n_features=train.m)
    else:
        test = load_dataset(test_path, format)
        if test.m != train.m:
            raise ValueError(
                f"dimension mismatch between train ({train.m}) and test ({test.m})"
            )
    sim = similarity
    if sim == AUTO_RBF:
        gamma = tune_gamma(train, tuning or TuningPlan(), _child_seed(seed, 3))
        sim = SimilarityConfig(RBF, gamma=gamma)
    model = fit(train, sim, sampling)
    scores = model.score_batch(test.features, workers=workers)
    preds = _decode_batch(decoder, model, scores, test.features, workers)
    lines = []
    for i, pred in enumerate(preds):
        line = ",".join(str(k) for k in sorted(pred))
        if verbose_scores:
            line += "\t" + " ".join(f"{v:.6f}" for v in scores[i])
        lines.append(line)
    if output_path is not None:
        with open(output_path, "w", encoding="utf-8") as fh:
            fh.write("\n".join(lines) + "\n")
    return lines


def _config_echo(config):
    if config is None:
        return None
    echo = asdict(config)
    if isinstance(config.similarity, SimilarityConfig):
        echo["similarity"] = asdict(config.similarity)
    echo["tuning"]["gamma_grid"] = list(config.tuning.gamma_grid)
    return echo


def _round6(x):
    return round(float(x), 6)


def _child_seed(seed, *key):
    """Stable derived seed for a nested deterministic stage."""
    return int(np.random.SeedSequence([int(seed), *map(int, key)]).generate_state(1)[0])
