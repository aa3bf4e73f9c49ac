"""simlabel: multi-label learning by summed pairwise similarities.

A scorer sums a similarity function between a query and every training
instance carrying a given label; decoders turn score vectors into label
sets either by predicting the set size or by a learned linear threshold.
Includes ranking and set metrics plus a seeded cross-validation harness.
"""

from .data import (
    FORMAT_CSV,
    FORMAT_SVM,
    DatasetFormatError,
    FoldPlan,
    TrainingSet,
    load_dataset,
    normalize,
    split_folds,
)
from .decoding import (
    SizeModel,
    ThresholdModel,
    compute_s_target,
    decode_threshold,
    decode_topk,
    fit_size_model,
    fit_threshold,
    predict_size,
    predict_sizes,
)
from .harness import (
    AUTO_RBF,
    ExperimentConfig,
    TuningPlan,
    emit_report,
    run_experiment,
    run_predict,
    tune_gamma,
)
from .kernels import BACKEND, HAS_NUMBA
from .metrics import (
    METRIC_NAMES,
    EvaluationReport,
    FoldMetrics,
    MetricSummary,
    aggregate_folds,
    average_precision,
    compute_fold_metrics,
    coverage,
    hamming_loss,
    one_error,
    rank_labels,
    ranking_loss,
)
from .scoring import SamplingConfig, SmlModel, fit, sample_training
from .similarity import POLYNOMIAL, RBF, SimilarityConfig, polynomial, rbf

__version__ = "0.1.0"

__all__ = [
    "AUTO_RBF",
    "BACKEND",
    "DatasetFormatError",
    "EvaluationReport",
    "ExperimentConfig",
    "FORMAT_CSV",
    "FORMAT_SVM",
    "FoldMetrics",
    "FoldPlan",
    "HAS_NUMBA",
    "METRIC_NAMES",
    "MetricSummary",
    "POLYNOMIAL",
    "RBF",
    "SamplingConfig",
    "SimilarityConfig",
    "SizeModel",
    "SmlModel",
    "ThresholdModel",
    "TrainingSet",
    "TuningPlan",
    "aggregate_folds",
    "average_precision",
    "compute_fold_metrics",
    "compute_s_target",
    "coverage",
    "decode_threshold",
    "decode_topk",
    "emit_report",
    "fit",
    "fit_size_model",
    "fit_threshold",
    "hamming_loss",
    "load_dataset",
    "normalize",
    "one_error",
    "polynomial",
    "predict_size",
    "predict_sizes",
    "rank_labels",
    "ranking_loss",
    "rbf",
    "run_experiment",
    "run_predict",
    "sample_training",
    "split_folds",
    "tune_gamma",
    "__version__",
]
