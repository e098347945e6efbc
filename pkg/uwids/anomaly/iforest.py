# 2026/09/08
"""
iforest.py - Isolation Forest baseline.

Defines IsolationForestModel, a thin wrapper over scikit-learn's
IsolationForest with the verdict convention of the other detectors
(+1 inlier, -1 outlier), and the functions 'train_iforest' and
'iforest_verdict'.

"""

from __future__ import annotations

import numpy as np
from numpy.typing import ArrayLike
from sklearn.ensemble import IsolationForest

from uwids.errors import ConfigurationError, TrainingError


class IsolationForestModel:
    def __init__(
        self,
        trees: int = 100,
        subsample: int | str = "auto",
        contamination: float = 0.01,
        seed: int = 0,
    ) -> None:
        if not (0.0 < contamination <= 0.5):
            raise ConfigurationError(
                f"Contamination must lie in (0, 0.5], not '{contamination}'."
            )
        if trees < 1:
            raise ConfigurationError(f"Tree count must be positive, not '{trees}'.")
        self.trees = trees
        self.subsample = subsample
        self.contamination = contamination
        self.seed = seed
        self.forest = IsolationForest(
            n_estimators=trees,
            max_samples=subsample,
            contamination=contamination,
            random_state=seed,
        )

    def fit(self, data: ArrayLike) -> IsolationForestModel:
        data = np.atleast_2d(np.asarray(data, dtype=float))
        if len(data) < 2:
            raise TrainingError("Isolation forest needs at least two rows.")
        if isinstance(self.subsample, int) and self.subsample > len(data):
            self.forest.set_params(max_samples=len(data))
        self.forest.fit(data)
        return self

    def score_samples(self, data: ArrayLike) -> np.ndarray:
        """Anomaly scores from mean path length (lower is more anomalous)."""
        return self.forest.score_samples(np.atleast_2d(np.asarray(data, dtype=float)))

    def predict(self, data: ArrayLike) -> np.ndarray:
        return self.forest.predict(np.atleast_2d(np.asarray(data, dtype=float)))


def train_iforest(
    data: ArrayLike,
    trees: int = 100,
    subsample: int | str = "auto",
    contamination: float = 0.01,
    seed: int = 0,
) -> IsolationForestModel:
    """Fits an isolation forest whose threshold flags about `contamination`
    of the training rows."""
    return IsolationForestModel(trees, subsample, contamination, seed).fit(data)


def iforest_verdict(model: IsolationForestModel, x: ArrayLike) -> int:
    x = np.asarray(x, dtype=float).ravel()
    return int(model.predict(x[None, :])[0])
