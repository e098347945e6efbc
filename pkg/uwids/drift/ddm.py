# 2026/09/09
"""
ddm.py - Drift detection method over a binary error stream.

Defines DdmState and 'ddm_update'. The detector tracks the running error
rate p and its deviation s = sqrt(p (1 - p) / n), remembers the point where
p + s was lowest, and compares the current p + s with it:
- warning when p + s > p_min + 2 s_min,
- drift when p + s > p_min + 3 s_min, after which the state resets.

"""

import math

from uwids.drift.base import DriftDetector, DriftSignal, SignalKind
from uwids.errors import ConfigurationError, InputRangeError


class DdmState(DriftDetector):
    name = "ddm"

    def __init__(
        self, *, min_samples: int = 30, warning_level: float = 2.0, drift_level: float = 3.0
    ) -> None:
        super().__init__()
        if not (0 < warning_level < drift_level):
            raise ConfigurationError("DDM needs 0 < warning_level < drift_level.")
        self.min_samples = min_samples
        self.warning_level = warning_level
        self.drift_level = drift_level
        self.reset()

    def reset(self) -> None:
        self.n = 0
        self.p = 0.0
        self.s = 0.0
        self.p_min = math.inf
        self.s_min = math.inf

    def update(self, error: int | bool) -> DriftSignal:
        if error not in (0, 1):
            raise InputRangeError(f"DDM accepts errors 0 or 1, not '{error}'.")
        self.n_seen += 1
        self.n += 1
        self.p += (float(error) - self.p) / self.n
        self.s = math.sqrt(self.p * (1.0 - self.p) / self.n)

        if self.n < self.min_samples:
            return self._signal(SignalKind.STABLE)
        if self.p + self.s <= self.p_min + self.s_min:
            self.p_min, self.s_min = self.p, self.s

        level = self.p + self.s
        if level > self.p_min + self.drift_level * self.s_min:
            signal = self._signal(SignalKind.DRIFT, {"p": self.p, "s": self.s})
            self.reset()
            return signal
        if level > self.p_min + self.warning_level * self.s_min:
            return self._signal(SignalKind.WARNING, {"p": self.p, "s": self.s})
        return self._signal(SignalKind.STABLE)


def ddm_update(state: DdmState, error: int | bool) -> DriftSignal:
    return state.update(error)
