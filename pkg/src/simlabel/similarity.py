"""Parameterized similarity functions over feature-vector pairs.

Label confidences are sums of these values, so both functions must be
symmetric in their arguments; the scalar forms here are the definitional
contract that the batch kernels must reproduce.
"""

from dataclasses import dataclass

import numpy as np

RBF = "rbf"
POLYNOMIAL = "polynomial"


@dataclass(frozen=True)
class SimilarityConfig:
    """Which similarity to use and its parameters.

    kind "rbf" requires gamma > 0. kind "polynomial" uses offset c >= 0 and
    integer degree d >= 1; the defaults (c=1, d=2) give the quadratic
    variant, d=1 the linear one.
    """

    kind: str
    gamma: float | None = None
    c: float = 1.0
    d: int = 2

    def __post_init__(self):
        if self.kind == RBF:
            if self.gamma is None or not self.gamma > 0:
                raise ValueError(f"rbf similarity requires gamma > 0, got {self.gamma}")
        elif self.kind == POLYNOMIAL:
            if not (isinstance(self.d, int) and self.d >= 1):
                raise ValueError(f"polynomial degree must be an integer >= 1, got {self.d}")
            if self.c < 0:
                raise ValueError(f"polynomial offset must be >= 0, got {self.c}")
        else:
            raise ValueError(f"unknown similarity kind {self.kind!r}")


def rbf(x_i, x_j, gamma):
    """exp(-gamma * ||x_i - x_j||^2); in (0, 1] with 1 iff the vectors match."""
    x_i, x_j = _check_pair(x_i, x_j)
    if not gamma > 0:
        raise ValueError(f"gamma must be > 0, got {gamma}")
    diff = x_i - x_j
    return float(np.exp(-gamma * np.dot(diff, diff)))


def polynomial(x_i, x_j, c=1.0, d=2):
    """(<x_i, x_j> + c) ** d."""
    x_i, x_j = _check_pair(x_i, x_j)
    if not (isinstance(d, int) and d >= 1):
        raise ValueError(f"polynomial degree must be an integer >= 1, got {d}")
    return float((np.dot(x_i, x_j) + c) ** d)


def evaluate(config, x_i, x_j):
    """Apply the similarity described by config to one pair of vectors."""
    if config.kind == RBF:
        return rbf(x_i, x_j, config.gamma)
    return polynomial(x_i, x_j, config.c, config.d)


def _check_pair(x_i, x_j):
    x_i = np.asarray(x_i, dtype=np.float64)
    x_j = np.asarray(x_j, dtype=np.float64)
    if x_i.shape != x_j.shape or x_i.ndim != 1:
        raise ValueError(f"dimension mismatch: {x_i.shape} vs {x_j.shape}")
    return x_i, x_j
