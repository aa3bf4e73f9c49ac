"""Numba kernel backend: jit-compiled scoring loops.

The per-pair similarity is one inlined helper shared by every kernel, and
every accumulator is filled in ascending training-row order, so the batch,
scatter and per-label paths agree bit for bit.
"""

import math

import numpy as np
from numba import njit

KIND_RBF = 0
KIND_POLYNOMIAL = 1


@njit(cache=True, inline="always")
def _pair(train, j, x, kind, p1, p2):
    if kind == KIND_RBF:
        d2 = 0.0
        for t in range(x.shape[0]):
            diff = train[j, t] - x[t]
            d2 += diff * diff
        return math.exp(-p1 * d2)
    s = 0.0
    for t in range(x.shape[0]):
        s += train[j, t] * x[t]
    return (s + p1) ** p2


@njit(cache=True, nogil=True)
def pair_similarities(train, x, kind, p1, p2):
    phi = np.empty(train.shape[0], dtype=np.float64)
    for j in range(train.shape[0]):
        phi[j] = _pair(train, j, x, kind, p1, p2)
    return phi


@njit(cache=True, nogil=True)
def label_score(train, x, kind, p1, p2, member_ids):
    acc = 0.0
    for idx in range(member_ids.shape[0]):
        acc += _pair(train, member_ids[idx], x, kind, p1, p2)
    return acc


@njit(cache=True, nogil=True)
def bin_scores(phi, bin_indptr, bin_indices, n_bins):
    out = np.zeros(n_bins, dtype=np.float64)
    for j in range(phi.shape[0]):
        for p in range(bin_indptr[j], bin_indptr[j + 1]):
            out[bin_indices[p]] += phi[j]
    return out


@njit(cache=True, nogil=True)
def batch_bin_scores(train, X, kind, p1, p2, bin_indptr, bin_indices, n_bins, start, stop, out):
    for r in range(start, stop):
        for b in range(n_bins):
            out[r, b] = 0.0
        for j in range(train.shape[0]):
            phi = _pair(train, j, X[r], kind, p1, p2)
            for p in range(bin_indptr[j], bin_indptr[j + 1]):
                out[r, bin_indices[p]] += phi
