"""Turn score vectors into label sets.

Two decoders: set-size prediction (recast the training set as a multi-class
problem over label-set cardinalities, pick the cardinality with the largest
similarity sum, keep that many top-scored labels) and a linear threshold
t(x) = <w, f(x)> + b fit by least squares against per-instance optimal
separating thresholds.
"""

from dataclasses import dataclass

import numpy as np

from . import kernels
from .data import TrainingSet
from .scoring import _kernel_args, run_batch
from .similarity import SimilarityConfig


@dataclass(frozen=True)
class SizeModel:
    """Cardinality predictor: training instances relabeled with |Y_i|.

    size_classes holds the distinct observed cardinalities, ascending;
    class_of[i] is the position of instance i's cardinality in it.
    """

    training: TrainingSet
    similarity: SimilarityConfig
    size_classes: np.ndarray
    class_of: np.ndarray

    @property
    def _bin_csr(self):
        indptr = np.arange(self.training.n + 1, dtype=np.int64)
        return indptr, self.class_of


def fit_size_model(training, similarity):
    """Relabel every instance with its label-set size."""
    if training.n == 0:
        raise ValueError("empty training set")
    cards = np.array([len(s) for s in training.label_sets], dtype=np.int64)
    size_classes = np.unique(cards)
    class_of = np.searchsorted(size_classes, cards)
    size_classes.setflags(write=False)
    class_of.setflags(write=False)
    return SizeModel(
        training=training,
        similarity=similarity,
        size_classes=size_classes,
        class_of=class_of.astype(np.int64),
    )


def predict_size(model, x):
    """Cardinality whose members have the largest similarity sum to x;
    exact ties go to the smaller cardinality."""
    sums = _class_sums(model, x)
    return int(model.size_classes[int(np.argmax(sums))])


def predict_sizes(model, xs, workers=1):
    """Vector of predict_size results for a batch of instances."""
    X = np.ascontiguousarray(xs, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != model.training.m:
        raise ValueError(
            f"dimension mismatch: expected width {model.training.m}, got shape {X.shape}"
        )
    kind, p1, p2 = _kernel_args(model.similarity)
    indptr, indices = model._bin_csr
    sums = run_batch(
        model.training.features, X, kind, p1, p2, indptr, indices,
        model.size_classes.shape[0], workers,
    )
    return model.size_classes[np.argmax(sums, axis=1)]


def _class_sums(model, x):
    x = np.ascontiguousarray(x, dtype=np.float64)
    if x.ndim != 1 or x.shape[0] != model.training.m:
        raise ValueError(
            f"dimension mismatch: expected vector of length {model.training.m}, "
            f"got shape {x.shape}"
        )
    kind, p1, p2 = _kernel_args(model.similarity)
    phi = kernels.pair_similarities(model.training.features, x, kind, p1, p2)
    indptr, indices = model._bin_csr
    return kernels.bin_scores(phi, indptr, indices, model.size_classes.shape[0])


def decode_topk(scores, size):
    """The `size` labels with the largest scores; ties to the smaller id."""
    scores = np.asarray(scores, dtype=np.float64)
    K = scores.shape[0]
    if not 0 <= size <= K:
        raise ValueError(f"size must be in 0..{K}, got {size}")
    order = np.lexsort((np.arange(K), -scores))
    return {int(k) + 1 for k in order[:size]}


def compute_s_target(scores, labels):
    """Threshold separating relevant from irrelevant scores with the fewest
    violations; candidates are midpoints of consecutive distinct scores plus
    one step beyond either end. Among minimizers the midpoint of the widest
    gap wins, then the larger value."""
    scores = np.asarray(scores, dtype=np.float64)
    K = scores.shape[0]
    relevant = np.zeros(K, dtype=bool)
    for k in labels:
        if not 1 <= k <= K:
            raise ValueError(f"label id {k} out of range 1..{K}")
        relevant[k - 1] = True

    distinct = np.unique(scores)
    candidates = [(distinct[0] - 1.0, np.inf)]
    for lo, hi in zip(distinct[:-1], distinct[1:]):
        candidates.append(((lo + hi) / 2.0, hi - lo))
    candidates.append((distinct[-1] + 1.0, np.inf))

    best = None
    for tau, width in candidates:
        errors = int(np.sum(scores[relevant] <= tau)) + int(np.sum(scores[~relevant] >= tau))
        key = (errors, -width, -tau)
        if best is None or key < best[0]:
            best = (key, tau)
    return float(best[1])


@dataclass(frozen=True)
class ThresholdModel:
    """Linear threshold t(x) = <w, f(x)> + b over score vectors."""

    w: np.ndarray
    b: float

    def __post_init__(self):
        w = np.ascontiguousarray(self.w, dtype=np.float64)
        w.setflags(write=False)
        object.__setattr__(self, "w", w)
        if not (np.all(np.isfinite(w)) and np.isfinite(self.b)):
            raise ValueError("threshold model weights must be finite")

    def threshold(self, scores):
        scores = np.asarray(scores, dtype=np.float64)
        if scores.shape != self.w.shape:
            raise ValueError(
                f"dimension mismatch: expected {self.w.shape[0]} scores, got shape {scores.shape}"
            )
        return float(self.w @ scores + self.b)


def fit_threshold(score_rows, targets):
    """Least-squares fit of (w, b) to per-instance target thresholds,
    solved by ridge-stabilized normal equations (lambda = 1e-8)."""
    try:
        F = np.atleast_2d(np.asarray(score_rows, dtype=np.float64))
    except ValueError:
        raise ValueError("score rows must all have the same length") from None
    t = np.asarray(targets, dtype=np.float64)
    if F.ndim != 2 or F.size == 0 or t.ndim != 1 or F.shape[0] != t.shape[0]:
        raise ValueError(f"score rows and targets disagree: {F.shape} vs {t.shape}")
    A = np.hstack([F, np.ones((F.shape[0], 1))])
    G = A.T @ A + 1e-8 * np.eye(A.shape[1])
    beta = np.linalg.solve(G, A.T @ t)
    return ThresholdModel(w=beta[:-1], b=float(beta[-1]))


def decode_threshold(scores, model):
    """Labels whose score strictly exceeds the learned threshold t(x)."""
    scores = np.asarray(scores, dtype=np.float64)
    tau = model.threshold(scores)
    return {int(k) + 1 for k in np.flatnonzero(scores > tau)}
