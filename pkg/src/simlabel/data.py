"""Dataset representation, ingestion, normalization, per-label indexing and fold splitting.

Instances are numbered 0..n-1 (row order of the input file). Label ids are
1-based throughout the public API; the label space is {1..K}.
"""

import csv
from dataclasses import dataclass

import numpy as np

FORMAT_SVM = "multilabel-svm"
FORMAT_CSV = "csv"


class DatasetFormatError(ValueError):
    """Input file does not parse under the declared format."""


def normalize(v):
    """Scale a vector to unit L2 norm, preserving direction.

    Raises ValueError for zero-norm input.
    """
    arr = np.asarray(v, dtype=np.float64)
    norm = float(np.linalg.norm(arr))
    if norm == 0.0:
        raise ValueError("cannot normalize a zero-norm vector")
    return arr / norm


class TrainingSet:
    """Immutable multi-label dataset: unit feature rows plus per-label index.

    features    -- (n, m) float64 array, one row per instance (read-only)
    label_sets  -- tuple of frozensets of 1-based label ids
    K           -- label-space size; every label id lies in 1..K
    """

    def __init__(self, features, label_sets, K=None):
        features = np.ascontiguousarray(features, dtype=np.float64)
        if features.ndim != 2:
            raise ValueError(f"features must be 2-dimensional, got shape {features.shape}")
        sets = tuple(frozenset(int(k) for k in s) for s in label_sets)
        if len(sets) != features.shape[0]:
            raise ValueError(
                f"feature rows ({features.shape[0]}) and label sets ({len(sets)}) disagree"
            )
        max_seen = max((max(s) for s in sets if s), default=0)
        min_seen = min((min(s) for s in sets if s), default=1)
        if min_seen < 1:
            raise ValueError(f"label ids must be >= 1, got {min_seen}")
        if K is None:
            K = max_seen
        elif max_seen > K:
            raise ValueError(f"label id {max_seen} exceeds declared label-space size {K}")
        self._features = features
        self._features.setflags(write=False)
        self._label_sets = sets
        self._K = int(K)
        self._build_indexes()

    def _build_indexes(self):
        n, K = self.n, self._K
        per_label = [[] for _ in range(K)]
        indptr = np.zeros(n + 1, dtype=np.int64)
        flat = []
        for i, s in enumerate(self._label_sets):
            for k in sorted(s):
                per_label[k - 1].append(i)
                flat.append(k - 1)
            indptr[i + 1] = len(flat)
        self._label_index = tuple(
            _readonly(np.asarray(ids, dtype=np.int64)) for ids in per_label
        )
        self._csr_indptr = _readonly(indptr)
        self._csr_indices = _readonly(np.asarray(flat, dtype=np.int64))

    @property
    def features(self):
        return self._features

    @property
    def label_sets(self):
        return self._label_sets

    @property
    def n(self):
        return self._features.shape[0]

    @property
    def m(self):
        return self._features.shape[1]

    @property
    def K(self):
        return self._K

    @property
    def avg_cardinality(self):
        """Mean label-set size over instances."""
        if self.n == 0:
            return 0.0
        return sum(len(s) for s in self._label_sets) / self.n

    @property
    def label_csr(self):
        """(indptr, indices): 0-based label positions of instance i at
        indices[indptr[i]:indptr[i+1]], ascending within each instance."""
        return self._csr_indptr, self._csr_indices

    def label_subset(self, k):
        """Instance ids carrying label k, ascending. k is a 1-based label id."""
        if not 1 <= k <= self._K:
            raise ValueError(f"label id {k} out of range 1..{self._K}")
        return self._label_index[k - 1]

    def subset(self, ids):
        """New TrainingSet restricted to the given instance ids (label space kept)."""
        ids = np.asarray(ids, dtype=np.int64)
        return TrainingSet(
            self._features[ids],
            [self._label_sets[i] for i in ids],
            K=self._K,
        )


def _readonly(arr):
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class FoldPlan:
    """Assignment of every instance id to one of fold_count folds."""

    fold_count: int
    assignment: np.ndarray
    seed: int

    def test_ids(self, fold):
        """Instance ids held out in the given fold, ascending."""
        return np.flatnonzero(self.assignment == fold)

    def train_ids(self, fold):
        """Instance ids outside the given fold, ascending."""
        return np.flatnonzero(self.assignment != fold)


def split_folds(training, fold_count, seed):
    """Deal shuffled instance ids round-robin into fold_count folds.

    Deterministic for a fixed seed; fold sizes differ by at most one.
    """
    n = training.n
    if not 2 <= fold_count <= n:
        raise ValueError(f"fold_count must be in 2..{n}, got {fold_count}")
    order = np.random.default_rng(seed).permutation(n)
    assignment = np.empty(n, dtype=np.int64)
    assignment[order] = np.arange(n, dtype=np.int64) % fold_count
    return FoldPlan(fold_count=int(fold_count), assignment=_readonly(assignment), seed=int(seed))


def load_dataset(path, format=FORMAT_SVM, n_features=None):
    """Load a multi-label dataset and normalize every feature vector.

    format "multilabel-svm": one instance per line,
        `<label[,label...]> <idx>:<val> [<idx>:<val> ...]`
    with 1-based integer labels and 1-based, strictly ascending feature
    indices. A line starting with whitespace has an empty label set. An
    optional first line of three integers `n m K` declares the sizes.

    format "csv": header `label_1..label_K,f_1..f_m`, then one row per
    instance with 0/1 label cells and real feature cells.

    n_features forces the feature dimension (svm format only); indices
    beyond it are an error.
    """
    if format == FORMAT_SVM:
        features, labels, K = _load_svm(path, n_features)
    elif format == FORMAT_CSV:
        features, labels, K = _load_csv(path)
    else:
        raise ValueError(f"unknown dataset format {format!r}")
    return TrainingSet(features, labels, K=K)


def _load_svm(path, n_features=None):
    declared = None
    rows = []  # (line_no, labels, [(idx, val)...])
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, 1):
            line = raw.rstrip("\n")
            if not line.strip():
                continue
            if declared is None and not rows and ":" not in line and not line[0].isspace():
                tokens = line.split()
                if len(tokens) == 3 and all(_is_int(t) for t in tokens):
                    declared = tuple(int(t) for t in tokens)
                    if any(v < 0 for v in declared):
                        raise DatasetFormatError(f"line {line_no}: negative header value")
                    continue
            rows.append(_parse_svm_line(line, line_no))
    if not rows:
        raise DatasetFormatError("no instances")

    max_label = max((max(ls) for _, ls, _ in rows if ls), default=0)
    max_index = max((pairs[-1][0] for _, _, pairs in rows if pairs), default=0)
    if declared is not None:
        n_decl, m_decl, k_decl = declared
        if n_decl != len(rows):
            raise DatasetFormatError(
                f"header declares {n_decl} instances but file has {len(rows)}"
            )
        if max_index > m_decl:
            raise DatasetFormatError(
                f"feature index {max_index} exceeds declared dimension {m_decl}"
            )
        if max_label > k_decl:
            raise DatasetFormatError(
                f"label id {max_label} exceeds declared label-space size {k_decl}"
            )
        m, K = m_decl, k_decl
    else:
        m, K = max_index, max_label
    if n_features is not None:
        if max_index > n_features:
            raise DatasetFormatError(
                f"feature index {max_index} exceeds required dimension {n_features}"
            )
        m = int(n_features)

    X = np.zeros((len(rows), m), dtype=np.float64)
    for i, (_, _, pairs) in enumerate(rows):
        for idx, val in pairs:
            X[i, idx - 1] = val
    _normalize_rows(X, [ln for ln, _, _ in rows])
    return X, [ls for _, ls, _ in rows], K


def _parse_svm_line(line, line_no):
    if line[0].isspace():
        label_field, rest = "", line.strip()
    else:
        parts = line.split(None, 1)
        label_field = parts[0]
        rest = parts[1] if len(parts) > 1 else ""
    labels = []
    if label_field:
        for tok in label_field.split(","):
            if not _is_int(tok):
                raise DatasetFormatError(f"line {line_no}: malformed label field {label_field!r}")
            k = int(tok)
            if k < 1:
                raise DatasetFormatError(f"line {line_no}: label id {k} < 1")
            labels.append(k)
    pairs = []
    prev = 0
    for tok in rest.split():
        idx_str, _, val_str = tok.partition(":")
        if not _is_int(idx_str) or not val_str:
            raise DatasetFormatError(f"line {line_no}: malformed feature {tok!r}")
        idx = int(idx_str)
        if idx < 1:
            raise DatasetFormatError(f"line {line_no}: feature index {idx} < 1")
        if idx <= prev:
            raise DatasetFormatError(
                f"line {line_no}: feature indices must be strictly ascending"
            )
        try:
            val = float(val_str)
        except ValueError:
            raise DatasetFormatError(f"line {line_no}: malformed feature value {val_str!r}") from None
        pairs.append((idx, val))
        prev = idx
    return line_no, labels, pairs


def _load_csv(path):
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DatasetFormatError("no instances") from None
        K = 0
        while K < len(header) and header[K].startswith("label"):
            K += 1
        if K == 0:
            raise DatasetFormatError("csv header has no leading label_* columns")
        if any(name.startswith("label") for name in header[K:]):
            raise DatasetFormatError("csv label columns must form a contiguous leading block")
        m = len(header) - K
        feats = []
        labels = []
        line_nos = []
        for line_no, row in enumerate(reader, 2):
            if not row:
                continue
            if len(row) != len(header):
                raise DatasetFormatError(
                    f"line {line_no}: expected {len(header)} cells, got {len(row)}"
                )
            ls = []
            for k in range(K):
                cell = _parse_float(row[k], line_no)
                if cell not in (0.0, 1.0):
                    raise DatasetFormatError(
                        f"line {line_no}: label cell must be 0 or 1, got {row[k]!r}"
                    )
                if cell == 1.0:
                    ls.append(k + 1)
            feats.append([_parse_float(c, line_no) for c in row[K:]])
            labels.append(ls)
            line_nos.append(line_no)
    if not feats:
        raise DatasetFormatError("no instances")
    X = np.asarray(feats, dtype=np.float64).reshape(len(feats), m)
    _normalize_rows(X, line_nos)
    return X, labels, K


def _normalize_rows(X, line_nos):
    norms = np.linalg.norm(X, axis=1)
    zero = np.flatnonzero(norms == 0.0)
    if zero.size:
        i = int(zero[0])
        raise DatasetFormatError(
            f"line {line_nos[i]}: zero-norm feature vector (instance {i})"
        )
    X /= norms[:, np.newaxis]


def _parse_float(cell, line_no):
    try:
        return float(cell)
    except ValueError:
        raise DatasetFormatError(f"line {line_no}: malformed number {cell!r}") from None


def _is_int(tok):
    try:
        int(tok)
    except ValueError:
        return False
    return True
