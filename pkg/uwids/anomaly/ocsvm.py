# 2026/09/08
"""
ocsvm.py - One-class support vector machine.

Defines OcsvmModel and the functions 'train_ocsvm' and 'ocsvm_decision'.

Training solves the nu-OCSVM dual

    min  1/2 sum_ij a_i a_j k(x_i, x_j)
    s.t. 0 <= a_i <= 1 / (nu * n),  sum_i a_i = 1

by sequential minimal optimization: at every step the maximal violating
pair (i can grow, j can shrink, gradient gap largest) exchanges mass along
the equality constraint, until the gap falls under the KKT tolerance.

Features are min-max scaled with training statistics, and the scaling is
stored in the model.

"""

from __future__ import annotations

import logging
from typing import Any

import numpy as np
from numpy.typing import ArrayLike
from sklearn.preprocessing import MinMaxScaler

from uwids.anomaly.kernel import rbf_gram
from uwids.errors import ConfigurationError, DimensionError, TrainingError

logger = logging.getLogger(__name__)

DEFAULT_NU = 0.01
DEFAULT_GAMMA = 0.3
KKT_TOLERANCE = 1e-4
MAX_ITERATIONS = 200_000
TAU = 1e-12  # curvature floor


class OcsvmModel:
    """Trained nu-OCSVM with RBF kernel.

    Only vectors with a positive coefficient are kept. 'support_vectors'
    holds them in input units; scaling is applied at decision time.

    """

    def __init__(
        self,
        support_vectors: ArrayLike,
        alphas: ArrayLike,
        rho: float,
        gamma: float,
        nu: float,
        data_min: ArrayLike,
        data_max: ArrayLike,
    ) -> None:
        self.support_vectors = np.atleast_2d(np.asarray(support_vectors, dtype=float))
        self.alphas = np.asarray(alphas, dtype=float)
        if len(self.alphas) != len(self.support_vectors):
            raise ValueError("One coefficient per support vector is required.")
        if not (0.0 < nu <= 1.0):
            raise ConfigurationError(f"nu must lie in (0, 1], not '{nu}'.")
        if not gamma > 0:
            raise ConfigurationError(f"gamma must be positive, not '{gamma}'.")
        self.rho = float(rho)
        self.gamma = float(gamma)
        self.nu = float(nu)
        self.scaler = _scaler_from_bounds(data_min, data_max)
        self._scaled_svs = self.scaler.transform(self.support_vectors)

    @property
    def n_features(self) -> int:
        return self.support_vectors.shape[1]

    def decision_function(self, data: ArrayLike) -> np.ndarray:
        """Scores sum_i a_i k(sv_i, x) - rho, for each row of `data`."""
        data = np.atleast_2d(np.asarray(data, dtype=float))
        if data.shape[1] != self.n_features:
            raise DimensionError(
                f"Model expects {self.n_features} features, got {data.shape[1]}."
            )
        kernel = rbf_gram(self.scaler.transform(data), self._scaled_svs, self.gamma)
        return kernel @ self.alphas - self.rho

    def predict(self, data: ArrayLike) -> np.ndarray:
        """Verdicts: +1 inlier, -1 outlier (a zero score is an inlier)."""
        return np.where(self.decision_function(data) >= 0.0, 1, -1)

    def to_dict(self) -> dict[str, Any]:
        return {
            "nu": self.nu,
            "gamma": self.gamma,
            "rho": self.rho,
            "alphas": self.alphas.tolist(),
            "support_vectors": self.support_vectors.tolist(),
            "data_min": self.scaler.data_min_.tolist(),
            "data_max": self.scaler.data_max_.tolist(),
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> OcsvmModel:
        return cls(
            d["support_vectors"],
            d["alphas"],
            d["rho"],
            d["gamma"],
            d["nu"],
            d["data_min"],
            d["data_max"],
        )

    def __repr__(self) -> str:
        return (
            f"<OcsvmModel nu={self.nu} gamma={self.gamma} "
            f"svs={len(self.alphas)} rho={self.rho:.6f}>"
        )


def train_ocsvm(
    data: ArrayLike,
    nu: float = DEFAULT_NU,
    gamma: float = DEFAULT_GAMMA,
    *,
    tol: float = KKT_TOLERANCE,
    max_iter: int = MAX_ITERATIONS,
) -> OcsvmModel:
    """Trains a nu-OCSVM on normal-class rows of `data`."""
    data = np.atleast_2d(np.asarray(data, dtype=float))
    n = len(data)
    if n < 2:
        raise TrainingError(f"At least two training rows are required, got {n}.")
    if not (0.0 < nu <= 1.0):
        raise ConfigurationError(f"nu must lie in (0, 1], not '{nu}'.")
    if np.all(data == data[0]):
        raise TrainingError("All training rows are identical.")

    scaler = MinMaxScaler().fit(data)
    scaled = scaler.transform(data)
    gram = rbf_gram(scaled, scaled, gamma)
    np.fill_diagonal(gram, 1.0)

    alphas = solve_dual(gram, nu, tol=tol, max_iter=max_iter)
    grad = gram @ alphas
    rho = _offset(alphas, grad, 1.0 / (nu * n))

    keep = alphas > 0.0
    logger.debug(
        "OCSVM trained on %d rows: %d support vectors, rho=%.6f", n, keep.sum(), rho
    )
    return OcsvmModel(
        data[keep], alphas[keep], rho, gamma, nu, scaler.data_min_, scaler.data_max_
    )


def solve_dual(
    gram: np.ndarray, nu: float, *, tol: float = KKT_TOLERANCE, max_iter: int = MAX_ITERATIONS
) -> np.ndarray:
    """Minimizes 1/2 a'Qa over the nu-OCSVM feasible set.

    Returns the coefficient vector; the box and sum constraints hold up to
    rounding.

    """
    n = len(gram)
    upper = 1.0 / (nu * n)

    # Feasible start: the first floor(nu * n) coefficients at the bound
    alphas = np.zeros(n)
    full = min(n, int(np.floor(nu * n + 1e-12)))
    alphas[:full] = upper
    if full < n:
        alphas[full] = max(0.0, 1.0 - full * upper)
    grad = gram @ alphas

    for iteration in range(max_iter):
        can_grow = alphas < upper
        can_shrink = alphas > 0.0
        i = int(np.argmin(np.where(can_grow, grad, np.inf)))
        j = int(np.argmax(np.where(can_shrink, grad, -np.inf)))
        gap = grad[j] - grad[i]
        if not np.isfinite(gap) or gap <= tol:
            break

        curvature = max(gram[i, i] + gram[j, j] - 2.0 * gram[i, j], TAU)
        step = min(gap / curvature, upper - alphas[i], alphas[j])
        alphas[i] += step
        alphas[j] -= step
        grad += step * (gram[:, i] - gram[:, j])
    else:
        logger.warning("OCSVM solver stopped at %d iterations (gap %.2e)", max_iter, gap)

    np.clip(alphas, 0.0, upper, out=alphas)
    return alphas


def ocsvm_decision(model: OcsvmModel, x: ArrayLike) -> tuple[float, int]:
    """Score and verdict (+1 inlier, -1 outlier) of one vector."""
    x = np.asarray(x, dtype=float).ravel()
    score = float(model.decision_function(x[None, :])[0])
    return score, 1 if score >= 0.0 else -1


def dual_objective(gram: np.ndarray, alphas: ArrayLike) -> float:
    alphas = np.asarray(alphas, dtype=float)
    return 0.5 * float(alphas @ gram @ alphas)


# Auxiliar functions


def _offset(alphas: np.ndarray, grad: np.ndarray, upper: float) -> float:
    """Mean gradient over margin vectors (0 < a < upper), or the gradient at
    the largest coefficient when none is strictly inside the box."""
    margin = (alphas > 1e-12) & (alphas < upper - 1e-12)
    if margin.any():
        return float(grad[margin].mean())
    return float(grad[int(np.argmax(alphas))])


def _scaler_from_bounds(data_min: ArrayLike, data_max: ArrayLike) -> MinMaxScaler:
    bounds = np.vstack([np.asarray(data_min, dtype=float), np.asarray(data_max, dtype=float)])
    return MinMaxScaler().fit(bounds)
