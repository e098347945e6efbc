# 2026/09/09
"""
kswin.py - Kolmogorov-Smirnov windowing drift detector.

Defines KswinState, 'kswin_update' and 'kswin_threshold'. Once the window
holds 'window_size' values, the 'stat_size' most recent ones are compared
with a seeded random sample of the same size from the older part. Drift is
signalled when the two-sample statistic exceeds the critical value at level
'alpha'; the window then keeps only the recent values.

"""

import math
from collections import deque

import numpy as np
from scipy.stats import ks_2samp

from uwids.drift.base import DriftDetector, DriftSignal, SignalKind
from uwids.errors import ConfigurationError


def kswin_threshold(alpha: float, n: int, m: int) -> float:
    """Critical value of the two-sample statistic for sizes `n` and `m`."""
    return math.sqrt(-math.log(alpha / 2.0) * (n + m) / (n * m))


def kswin_statistic(old: np.ndarray, recent: np.ndarray) -> float:
    return float(ks_2samp(old, recent).statistic)


class KswinState(DriftDetector):
    name = "kswin"

    def __init__(
        self,
        alpha: float = 0.005,
        window_size: int = 100,
        stat_size: int = 30,
        seed: int = 0,
    ) -> None:
        super().__init__()
        if not (0.0 < alpha < 1.0):
            raise ConfigurationError(f"alpha must lie in (0, 1), not '{alpha}'.")
        if not (0 < stat_size < window_size - stat_size + 1):
            raise ConfigurationError("stat_size must be positive and below half the window.")
        self.alpha = alpha
        self.window_size = window_size
        self.stat_size = stat_size
        self.seed = seed
        self.rng = np.random.default_rng(seed)
        self.threshold = kswin_threshold(alpha, stat_size, stat_size)
        self.reset()

    def reset(self) -> None:
        self.window: deque[float] = deque(maxlen=self.window_size)

    def update(self, value: float) -> DriftSignal:
        self.n_seen += 1
        self.window.append(float(value))
        if len(self.window) < self.window_size:
            return self._signal(SignalKind.STABLE)

        values = np.fromiter(self.window, dtype=float)
        older = values[: -self.stat_size]
        recent = values[-self.stat_size :]
        sample = self.rng.choice(older, size=self.stat_size, replace=False)
        statistic = kswin_statistic(sample, recent)
        if statistic > self.threshold:
            self.window = deque(recent, maxlen=self.window_size)
            return self._signal(SignalKind.DRIFT, {"statistic": statistic})
        return self._signal(SignalKind.STABLE)


def kswin_update(state: KswinState, value: float) -> DriftSignal:
    return state.update(value)
