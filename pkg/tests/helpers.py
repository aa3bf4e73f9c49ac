"""Shared builders for test datasets and files."""

import numpy as np

from simlabel import TrainingSet


def random_training(rng, n, m, K, min_card=1, max_card=None, unit=True):
    """Random TrainingSet with label-set sizes in [min_card, max_card]."""
    if max_card is None:
        max_card = min(3, K)
    X = rng.normal(size=(n, m))
    if unit:
        X /= np.linalg.norm(X, axis=1, keepdims=True)
    labels = []
    for _ in range(n):
        size = int(rng.integers(min_card, max_card + 1))
        labels.append(frozenset(int(k) + 1 for k in rng.choice(K, size=size, replace=False)))
    return TrainingSet(X, labels, K=K)


def prototype_data(rng, n, m, K, noise=0.5, max_card=3):
    """Separable multi-label data: each instance is the sum of the prototype
    vectors of its labels plus Gaussian noise. Returns (X, label_sets)."""
    protos = rng.normal(size=(K, m)) * 2.0
    X = np.empty((n, m))
    labels = []
    max_card = min(max_card, K)
    for i in range(n):
        size = int(rng.integers(1, max_card + 1))
        chosen = sorted(int(k) + 1 for k in rng.choice(K, size=size, replace=False))
        X[i] = protos[[k - 1 for k in chosen]].sum(axis=0) + rng.normal(size=m) * noise
        labels.append(frozenset(chosen))
    return X, labels


def write_svm(path, X, label_sets, header=None):
    """Write rows in the sparse label,label idx:val format (full precision)."""
    lines = []
    if header is not None:
        lines.append(" ".join(str(v) for v in header))
    for x, labels in zip(X, label_sets):
        field = ",".join(str(k) for k in sorted(labels))
        feats = " ".join(f"{j + 1}:{float(v)!r}" for j, v in enumerate(x))
        lines.append((field + " " + feats) if field else (" " + feats))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
    return path


def write_prototype_svm(path, rng, n, m, K, noise=0.5, max_card=3):
    X, labels = prototype_data(rng, n, m, K, noise=noise, max_card=max_card)
    write_svm(path, X, labels)
    return X, labels
