# 2026/09/13
"""
prequential.py - Test-then-train evaluation.

Defines the protocol StreamModel and the function 'prequential_evaluate'.
"""

from __future__ import annotations

from collections import deque
from typing import Iterable, Protocol

import numpy as np
import pandas as pd
from numpy.typing import ArrayLike

from uwids.errors import ConfigurationError

METRICS_WINDOW = 1000


class StreamModel(Protocol):
    def predict_one(self, x: ArrayLike) -> tuple[int, np.ndarray]: ...

    def learn_one(self, x: ArrayLike, y: int): ...


def prequential_evaluate(
    stream: Iterable[tuple[ArrayLike, int]],
    model: StreamModel,
    window: int = METRICS_WINDOW,
    *,
    learn: bool = True,
) -> pd.DataFrame:
    """Predicts every sample before learning it.

    Returns one row per sample with columns 'y', 'y_pred', 'correct',
    'accuracy' (running) and 'window_accuracy' (over the last 'window'
    samples). With 'learn' false the model is only scored.

    """
    if window < 1:
        raise ConfigurationError(f"Metrics window must be positive, not '{window}'.")
    recent: deque[bool] = deque(maxlen=window)
    rows = []
    hits = 0
    window_hits = 0
    for t, (x, y) in enumerate(stream):
        y_pred, _ = model.predict_one(x)
        correct = int(y_pred) == int(y)
        hits += correct
        if len(recent) == window:
            window_hits -= recent[0]
        recent.append(correct)
        window_hits += correct
        rows.append((int(y), int(y_pred), correct, hits / (t + 1), window_hits / len(recent)))
        if learn:
            model.learn_one(x, int(y))
    return pd.DataFrame(
        rows, columns=["y", "y_pred", "correct", "accuracy", "window_accuracy"]
    ).rename_axis("index")
