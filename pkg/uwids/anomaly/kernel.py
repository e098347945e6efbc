# 2026/09/08
"""
kernel.py - Radial basis function kernel
"""

import numpy as np
from numpy.typing import ArrayLike

from uwids.errors import ConfigurationError, DimensionError


def rbf_kernel(x: ArrayLike, y: ArrayLike, gamma: float) -> float:
    """exp(-gamma * ||x - y||^2) for two vectors."""
    _check_gamma(gamma)
    x, y = np.asarray(x, dtype=float).ravel(), np.asarray(y, dtype=float).ravel()
    if x.shape != y.shape:
        raise DimensionError(f"Vectors of size {x.size} and {y.size} cannot be compared.")
    diff = x - y
    return float(np.exp(-gamma * (diff @ diff)))


def rbf_gram(a: ArrayLike, b: ArrayLike, gamma: float) -> np.ndarray:
    """Kernel matrix K[i, j] = k(a_i, b_j) for row-stacked vectors."""
    _check_gamma(gamma)
    a, b = np.atleast_2d(np.asarray(a, dtype=float)), np.atleast_2d(np.asarray(b, dtype=float))
    if a.shape[1] != b.shape[1]:
        raise DimensionError(
            f"Vectors of size {a.shape[1]} and {b.shape[1]} cannot be compared."
        )
    sq = (a * a).sum(axis=1)[:, None] + (b * b).sum(axis=1)[None, :] - 2.0 * a @ b.T
    np.maximum(sq, 0.0, out=sq)
    return np.exp(-gamma * sq)


def _check_gamma(gamma: float) -> None:
    if not gamma > 0:
        raise ConfigurationError(f"Kernel gamma must be positive, not '{gamma}'.")
