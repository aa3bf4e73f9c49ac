"""Kernel-sum label scoring: per-label similarity sums and full score vectors.

A model is just the (optionally sampled) training set plus a similarity
config; all numerical work happens at scoring time. Score vectors are
float64 arrays indexed 0..K-1 for labels 1..K.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import kernels
from .data import TrainingSet
from .similarity import RBF, SimilarityConfig


@dataclass(frozen=True)
class SamplingConfig:
    """Uniform without-replacement training subsample taken at fit time."""

    fraction: float
    seed: int = 0

    def __post_init__(self):
        if not 0 < self.fraction <= 1:
            raise ValueError(f"sampling fraction must be in (0, 1], got {self.fraction}")


def sample_training(training, fraction, seed):
    """Keep ceil(fraction * n) uniformly chosen instances, ascending id order.

    Deterministic per seed; fraction 1.0 returns an identical instance set.
    """
    if not 0 < fraction <= 1:
        raise ValueError(f"sampling fraction must be in (0, 1], got {fraction}")
    count = math.ceil(fraction * training.n)
    rng = np.random.default_rng(seed)
    ids = np.sort(rng.choice(training.n, size=count, replace=False))
    return training.subset(ids)


@dataclass(frozen=True)
class SmlModel:
    """Scoring state: training data (post-sampling) plus similarity config.

    The training set is held by reference and never mutated.
    """

    training: TrainingSet
    similarity: SimilarityConfig
    sampling: SamplingConfig | None = None

    @property
    def K(self):
        return self.training.K

    def score_label(self, x, k):
        """Similarity sum between x and the training instances with label k,
        accumulated in ascending instance order."""
        x = self._check_vector(x)
        ids = self.training.label_subset(k)
        kind, p1, p2 = _kernel_args(self.similarity)
        return float(kernels.label_score(self.training.features, x, kind, p1, p2, ids))

    def score_all(self, x):
        """Score vector over all K labels from one pass over the training set."""
        x = self._check_vector(x)
        kind, p1, p2 = _kernel_args(self.similarity)
        phi = kernels.pair_similarities(self.training.features, x, kind, p1, p2)
        indptr, indices = self.training.label_csr
        return kernels.bin_scores(phi, indptr, indices, self.K)

    def score_batch(self, xs, workers=1):
        """Score many instances; elementwise identical to mapping score_all.

        Rows may be computed concurrently (workers > 1); results do not
        depend on the worker count.
        """
        X = self._check_matrix(xs)
        kind, p1, p2 = _kernel_args(self.similarity)
        indptr, indices = self.training.label_csr
        return run_batch(
            self.training.features, X, kind, p1, p2, indptr, indices, self.K, workers
        )

    def _check_vector(self, x):
        x = np.ascontiguousarray(x, dtype=np.float64)
        if x.ndim != 1 or x.shape[0] != self.training.m:
            raise ValueError(
                f"dimension mismatch: expected vector of length {self.training.m}, "
                f"got shape {x.shape}"
            )
        return x

    def _check_matrix(self, xs):
        if isinstance(xs, np.ndarray) and xs.ndim == 2:
            X = np.ascontiguousarray(xs, dtype=np.float64)
            if X.shape[1] != self.training.m:
                raise ValueError(
                    f"dimension mismatch: expected width {self.training.m}, got {X.shape[1]}"
                )
            return X
        rows = list(xs)
        if not rows:
            return np.empty((0, self.training.m), dtype=np.float64)
        for i, row in enumerate(rows):
            if np.asarray(row).shape != (self.training.m,):
                raise ValueError(
                    f"dimension mismatch at instance {i}: expected length "
                    f"{self.training.m}, got shape {np.asarray(row).shape}"
                )
        return np.ascontiguousarray(rows, dtype=np.float64)


def fit(training, similarity, sampling=None):
    """Build a scoring model; validates inputs and applies sampling, nothing more."""
    if not isinstance(training, TrainingSet):
        raise ValueError(f"training must be a TrainingSet, got {type(training).__name__}")
    if training.n == 0:
        raise ValueError("empty training set")
    if not isinstance(similarity, SimilarityConfig):
        raise ValueError(f"similarity must be a SimilarityConfig, got {type(similarity).__name__}")
    if sampling is not None:
        training = sample_training(training, sampling.fraction, sampling.seed)
    return SmlModel(training=training, similarity=similarity, sampling=sampling)


def _kernel_args(config):
    if config.kind == RBF:
        return kernels.KIND_RBF, float(config.gamma), 0.0
    return kernels.KIND_POLYNOMIAL, float(config.c), float(config.d)


def run_batch(features, X, kind, p1, p2, bin_indptr, bin_indices, n_bins, workers=1):
    """Run the fused batch kernel over X, optionally across worker threads.

    Rows are split into contiguous chunks; every row is computed by exactly
    one thread, so the result does not depend on the worker count.
    """
    out = np.empty((X.shape[0], n_bins), dtype=np.float64)
    args = (features, X, kind, p1, p2, bin_indptr, bin_indices, n_bins)
    if workers <= 1 or X.shape[0] < 2:
        kernels.batch_bin_scores(*args, 0, X.shape[0], out)
        return out
    bounds = np.linspace(0, X.shape[0], min(workers, X.shape[0]) + 1, dtype=np.int64)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [
            pool.submit(kernels.batch_bin_scores, *args, int(lo), int(hi), out)
            for lo, hi in zip(bounds[:-1], bounds[1:])
        ]
        for f in futures:
            f.result()
    return out
