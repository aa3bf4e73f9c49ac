"""Multi-label evaluation criteria over score vectors and label sets.

All five criteria average per-instance values. Instances on which a
criterion is undefined (empty relevant set; for ranking loss also the full
set) are skipped and the effective count reduced; skips are reported on the
module logger. Ranks are 1-based with ties broken toward the smaller label
id, and a tied relevant/irrelevant pair counts as a ranking-loss violation.
"""

import logging
from dataclasses import dataclass

import numpy as np

logger = logging.getLogger(__name__)

METRIC_NAMES = ("hamming_loss", "one_error", "coverage", "ranking_loss", "average_precision")


def rank_labels(scores):
    """1-based rank of every label, 1 = highest score, ties to smaller id."""
    scores = np.asarray(scores, dtype=np.float64)
    K = scores.shape[0]
    if K < 1:
        raise ValueError("need at least one label")
    order = np.lexsort((np.arange(K), -scores))
    ranks = np.empty(K, dtype=np.int64)
    ranks[order] = np.arange(1, K + 1)
    return ranks


def hamming_loss(pred, truth, K):
    """Mean symmetric-difference size between predicted and true sets, over K."""
    _check_lengths(pred, truth)
    total = 0
    for p, t in zip(pred, truth):
        p, t = set(p), set(t)
        _check_labels(p | t, K)
        total += len(p ^ t)
    return total / (len(pred) * K)


def one_error(scores, truth):
    """Fraction of instances whose top-scored label is irrelevant."""
    scores, truth = _check_scored(scores, truth)
    misses = 0
    counted = 0
    for s, t in zip(scores, truth):
        if not t:
            continue
        counted += 1
        if int(np.argmax(s)) + 1 not in t:
            misses += 1
    _note_skips(len(truth) - counted, "one_error")
    if counted == 0:
        raise ValueError("every instance has an empty label set")
    return misses / counted


def coverage(scores, truth):
    """Mean depth of the lowest-ranked relevant label, minus one."""
    scores, truth = _check_scored(scores, truth)
    total = 0
    counted = 0
    for s, t in zip(scores, truth):
        if not t:
            continue
        counted += 1
        ranks = rank_labels(s)
        total += max(ranks[k - 1] for k in t) - 1
    _note_skips(len(truth) - counted, "coverage")
    if counted == 0:
        raise ValueError("every instance has an empty label set")
    return float(total / counted)


def ranking_loss(scores, truth):
    """Fraction of relevant/irrelevant label pairs ordered wrongly (ties count)."""
    scores, truth = _check_scored(scores, truth)
    total = 0.0
    counted = 0
    for s, t in zip(scores, truth):
        K = s.shape[0]
        if len(t) in (0, K):
            continue
        counted += 1
        rel = np.array(sorted(t), dtype=np.int64) - 1
        irr = np.setdiff1d(np.arange(K), rel)
        bad = int(np.sum(s[rel][:, None] <= s[irr][None, :]))
        total += bad / (rel.size * irr.size)
    _note_skips(len(truth) - counted, "ranking_loss")
    if counted == 0:
        raise ValueError("every instance has an empty or full label set")
    return total / counted


def average_precision(scores, truth):
    """Mean over relevant labels of the share of relevant labels at or above
    that label's rank."""
    scores, truth = _check_scored(scores, truth)
    total = 0.0
    counted = 0
    for s, t in zip(scores, truth):
        if not t:
            continue
        counted += 1
        ranks = rank_labels(s)
        rel_ranks = np.array(sorted(ranks[k - 1] for k in t), dtype=np.int64)
        # after sorting, the i-th relevant rank has exactly i+1 relevant labels at or above it
        total += float(np.mean(np.arange(1, rel_ranks.size + 1) / rel_ranks))
    _note_skips(len(truth) - counted, "average_precision")
    if counted == 0:
        raise ValueError("every instance has an empty label set")
    return total / counted


@dataclass(frozen=True)
class FoldMetrics:
    """All five criteria for one fold."""

    hamming_loss: float
    one_error: float
    coverage: float
    ranking_loss: float
    average_precision: float


@dataclass(frozen=True)
class MetricSummary:
    mean: float
    std: float


@dataclass(frozen=True)
class EvaluationReport:
    """Per-metric mean and sample standard deviation over folds."""

    hamming_loss: MetricSummary
    one_error: MetricSummary
    coverage: MetricSummary
    ranking_loss: MetricSummary
    average_precision: MetricSummary
    folds: tuple


def compute_fold_metrics(scores, pred, truth, K):
    """Evaluate all five criteria on one fold's predictions."""
    return FoldMetrics(
        hamming_loss=hamming_loss(pred, truth, K),
        one_error=one_error(scores, truth),
        coverage=coverage(scores, truth),
        ranking_loss=ranking_loss(scores, truth),
        average_precision=average_precision(scores, truth),
    )


def aggregate_folds(per_fold):
    """Arithmetic mean and sample (n-1) standard deviation per metric;
    a single fold reports std 0."""
    per_fold = tuple(per_fold)
    if not per_fold:
        raise ValueError("need at least one fold")
    summaries = {}
    for name in METRIC_NAMES:
        values = np.array([getattr(f, name) for f in per_fold], dtype=np.float64)
        std = float(np.std(values, ddof=1)) if values.size > 1 else 0.0
        summaries[name] = MetricSummary(mean=float(np.mean(values)), std=std)
    return EvaluationReport(folds=per_fold, **summaries)


def _check_lengths(a, b):
    if len(a) != len(b) or len(a) == 0:
        raise ValueError(f"need equal nonzero counts, got {len(a)} and {len(b)}")


def _check_scored(scores, truth):
    _check_lengths(scores, truth)
    rows = [np.asarray(s, dtype=np.float64) for s in scores]
    K = rows[0].shape[0]
    for i, s in enumerate(rows):
        if s.ndim != 1 or s.shape[0] != K:
            raise ValueError(f"score vector {i} has shape {s.shape}, expected ({K},)")
    sets = [set(t) for t in truth]
    for t in sets:
        _check_labels(t, K)
    return rows, sets


def _check_labels(labels, K):
    for k in labels:
        if not 1 <= k <= K:
            raise ValueError(f"label id {k} out of range 1..{K}")


def _note_skips(skipped, name):
    if skipped:
        logger.debug("%s: skipped %d instance(s) with undefined value", name, skipped)
