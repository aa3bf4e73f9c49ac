"""Pure-numpy kernel backend.

All paths derive per-pair similarities from the single pair_similarities
routine, which keeps the scatter and per-label reductions bit-identical:
both add the same values into each accumulator in ascending row order.
"""

import numpy as np

KIND_RBF = 0
KIND_POLYNOMIAL = 1


def pair_similarities(train, x, kind, p1, p2):
    if kind == KIND_RBF:
        diff = train - x
        return np.exp(-p1 * np.einsum("ij,ij->i", diff, diff))
    return (train @ x + p1) ** p2


def label_score(train, x, kind, p1, p2, member_ids):
    if member_ids.size == 0:
        return 0.0
    picked = pair_similarities(train, x, kind, p1, p2)[member_ids]
    # cumsum is a strict left-to-right reduction, matching the scatter order
    return float(picked.cumsum()[-1])


def bin_scores(phi, bin_indptr, bin_indices, n_bins):
    out = np.zeros(n_bins, dtype=np.float64)
    np.add.at(out, bin_indices, np.repeat(phi, np.diff(bin_indptr)))
    return out


def batch_bin_scores(train, X, kind, p1, p2, bin_indptr, bin_indices, n_bins, start, stop, out):
    counts = np.diff(bin_indptr)
    for r in range(start, stop):
        phi = pair_similarities(train, X[r], kind, p1, p2)
        row = np.zeros(n_bins, dtype=np.float64)
        np.add.at(row, bin_indices, np.repeat(phi, counts))
        out[r] = row
