"""Hot scoring kernels with a numba backend and a pure-numpy fallback.

The backend is chosen once at import time from the environment variable
SIMLABEL_BACKEND: "numba", "numpy", or "auto" (default; numba when it
imports, numpy otherwise). Both backends expose the same four functions:

pair_similarities(train, x, kind, p1, p2) -> (n,) float64
    Similarity of x against every row of train.
label_score(train, x, kind, p1, p2, member_ids) -> float
    Per-label path: similarity sum over the given ascending member rows.
bin_scores(phi, bin_indptr, bin_indices, n_bins) -> (n_bins,) float64
    One-pass scatter: row j adds phi[j] to each of its bins, j ascending.
batch_bin_scores(train, X, kind, p1, p2, bin_indptr, bin_indices, n_bins,
                 start, stop, out) -> None
    Fused batch path writing rows [start, stop) of out; row r of out is
    bit-identical to bin_scores(pair_similarities(train, X[r], ...), ...).

kind is KIND_RBF (p1=gamma) or KIND_POLYNOMIAL (p1=c, p2=degree). Within a
backend the per-pair arithmetic is shared by all four functions, so the
scatter and per-label paths agree exactly.
"""

import os

KIND_RBF = 0
KIND_POLYNOMIAL = 1

_choice = os.environ.get("SIMLABEL_BACKEND", "auto").strip().lower() or "auto"
if _choice not in ("auto", "numba", "numpy"):
    raise ValueError(
        f"SIMLABEL_BACKEND must be 'numba', 'numpy' or 'auto', got {_choice!r}"
    )

if _choice == "numpy":
    from . import _numpy as _impl

    BACKEND = "numpy"
else:
    try:
        from . import _numba as _impl

        BACKEND = "numba"
    except ImportError:
        if _choice == "numba":
            raise
        from . import _numpy as _impl

        BACKEND = "numpy"

HAS_NUMBA = BACKEND == "numba"

pair_similarities = _impl.pair_similarities
label_score = _impl.label_score
bin_scores = _impl.bin_scores
batch_bin_scores = _impl.batch_bin_scores
