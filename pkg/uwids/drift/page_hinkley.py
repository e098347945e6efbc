# 2026/09/09
"""
page_hinkley.py - Page-Hinkley test for increases of the mean
"""

import math

from uwids.drift.base import DriftDetector, DriftSignal, SignalKind
from uwids.errors import ConfigurationError


class PageHinkleyState(DriftDetector):
    """Cumulative deviation m_t = sum (x_i - mean_i - delta), faded by
    'alpha'; drift when m_t - min(m) reaches 'threshold'."""

    name = "page_hinkley"

    def __init__(
        self,
        threshold: float = 50.0,
        delta: float = 0.005,
        alpha: float = 0.9999,
        *,
        min_samples: int = 30,
    ) -> None:
        super().__init__()
        if threshold <= 0 or not (0.0 < alpha <= 1.0):
            raise ConfigurationError("Page-Hinkley needs threshold > 0 and alpha in (0, 1].")
        self.threshold = threshold
        self.delta = delta
        self.alpha = alpha
        self.min_samples = min_samples
        self.reset()

    def reset(self) -> None:
        self.n = 0
        self.mean = 0.0
        self.cumulative = 0.0
        self.minimum = math.inf

    @property
    def statistic(self) -> float:
        return self.cumulative - self.minimum if self.n else 0.0

    def update(self, value: float) -> DriftSignal:
        self.n_seen += 1
        self.n += 1
        self.mean += (value - self.mean) / self.n
        self.cumulative = self.alpha * self.cumulative + (value - self.mean - self.delta)
        self.minimum = min(self.minimum, self.cumulative)

        if self.n >= self.min_samples and self.statistic >= self.threshold:
            signal = self._signal(SignalKind.DRIFT, {"statistic": self.statistic})
            self.reset()
            return signal
        return self._signal(SignalKind.STABLE)


def page_hinkley_update(state: PageHinkleyState, value: float) -> DriftSignal:
    return state.update(value)
