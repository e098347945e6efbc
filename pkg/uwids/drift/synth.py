# 2026/09/11
"""
synth.py - Synthetic streams with known change points.

Defines SynthStream and the generators 'synth_drift_stream', which builds
error-like Bernoulli streams with abrupt, gradual, incremental or recurring
drift, and 'label_flip_stream', which builds a labelled two-class stream
whose concept flips once.

Two concepts are used throughout: Bernoulli(0.2) before the change and
Bernoulli(0.8) after it. Change points are the indices of the first sample
drawn (even partly) from the new concept.

"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from uwids.errors import ConfigurationError

LOW_RATE = 0.2
HIGH_RATE = 0.8
TRANSITION_WIDTH = 500
RECURRING_PERIOD = 1000


class DriftKind(str, Enum):
    ABRUPT = "abrupt"
    GRADUAL = "gradual"
    INCREMENTAL = "incremental"
    RECURRING = "recurring"


@dataclass
class SynthStream:
    """Values, the concept rate behind each value, and true change points."""

    kind: DriftKind
    values: np.ndarray
    rates: np.ndarray
    change_points: list[int] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.values)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "length": len(self),
            "change_points": list(self.change_points),
        }


def synth_drift_stream(
    kind: DriftKind | str,
    length: int,
    seed: int = 0,
    *,
    change_at: int | None = None,
    width: int = TRANSITION_WIDTH,
    period: int = RECURRING_PERIOD,
    low: float = LOW_RATE,
    high: float = HIGH_RATE,
) -> SynthStream:
    """Returns a stream of 0/1 values of the given drift kind.

    - abrupt: the rate jumps from 'low' to 'high' at 'change_at'.
    - gradual: over 'width' samples from 'change_at', each value comes from
      the new concept with a probability growing linearly from 0 to 1.
    - incremental: the rate itself ramps linearly over the same span.
    - recurring: the two concepts alternate every 'period' samples.

    'change_at' defaults to the middle of the stream.

    """
    kind = DriftKind(kind)
    if length <= 0:
        raise ConfigurationError(f"Stream length must be positive, not '{length}'.")
    if width < 1 or period < 1:
        raise ConfigurationError("width and period must be positive.")
    rng = np.random.default_rng(seed)
    change_at = length // 2 if change_at is None else change_at
    index = np.arange(length)

    if kind == DriftKind.RECURRING:
        phase = (index // period) % 2
        rates = np.where(phase == 0, low, high)
        changes = list(range(period, length, period))
    else:
        progress = np.clip((index - change_at + 1) / width, 0.0, 1.0)
        if kind == DriftKind.ABRUPT:
            rates = np.where(index >= change_at, high, low)
        elif kind == DriftKind.GRADUAL:
            new_concept = rng.random(length) < progress
            rates = np.where(new_concept, high, low)
        else:
            rates = low + (high - low) * progress
        changes = [change_at] if 0 < change_at < length else []

    values = (rng.random(length) < rates).astype(float)
    return SynthStream(kind, values, rates.astype(float), changes)


def label_flip_stream(
    length: int,
    flip_at: int,
    seed: int = 0,
    *,
    n_features: int = 4,
    noise: float = 0.0,
) -> tuple[np.ndarray, np.ndarray]:
    """Uniform features in [0, 1]; label 1 when the first feature is at least
    0.5, and the opposite from 'flip_at' on.

    'noise' is the fraction of labels swapped at random.

    """
    if length <= 0 or n_features < 1:
        raise ConfigurationError("length and n_features must be positive.")
    rng = np.random.default_rng(seed)
    x = rng.random((length, n_features))
    y = (x[:, 0] >= 0.5).astype(int)
    y[flip_at:] = 1 - y[flip_at:]
    if noise > 0:
        swap = rng.random(length) < noise
        y[swap] = 1 - y[swap]
    return x, y
