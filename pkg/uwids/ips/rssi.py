# 2026/09/18
"""
rssi.py - Received signal strength at the surface buoy.

Defines RssiRange, RssiRegistry and the functions 'thorp_absorption',
'expected_rssi', 'measure_rssi', 'build_registry' and 'rssi_within_range'.

There is no radio at desk scale, so signal strength is synthesized from the
simulator geometry: source level minus a log-distance spreading loss and
Thorp's absorption at the carrier frequency, plus seeded Gaussian noise.
All levels are in dB.

"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from uwids.errors import ConfigurationError
from uwids.model import Node, Position

SOURCE_LEVEL = 150.0
SPREADING = 1.5
NOISE_STD = 1.0
MARGIN = 6.0


@dataclass(frozen=True)
class RssiRange:
    low: float
    high: float

    def __post_init__(self) -> None:
        if self.low > self.high:
            raise ConfigurationError(f"RSSI range [{self.low}, {self.high}] is empty.")

    def __contains__(self, value: float) -> bool:
        return self.low <= value <= self.high


class RssiRegistry(dict[int, RssiRange]):
    """Registered RSSI band of every node id."""

    def register(self, node_id: int, low: float, high: float) -> None:
        self[node_id] = RssiRange(low, high)


def thorp_absorption(frequency_khz: float) -> float:
    """Absorption coefficient in dB/km."""
    f2 = frequency_khz**2
    return 0.11 * f2 / (1 + f2) + 44 * f2 / (4100 + f2) + 2.75e-4 * f2 + 0.003


def expected_rssi(
    distance: float,
    frequency_khz: float = 25.0,
    *,
    source_level: float = SOURCE_LEVEL,
    spreading: float = SPREADING,
) -> float:
    """Noise-free level at `distance` metres (distances under 1 m count as 1 m)."""
    distance = max(distance, 1.0)
    loss = spreading * 10 * math.log10(distance) + distance / 1000 * thorp_absorption(frequency_khz)
    return source_level - loss


def measure_rssi(
    node: Node,
    receiver: Position,
    frequency_khz: float = 25.0,
    *,
    rng: np.random.Generator | None = None,
    noise_std: float = NOISE_STD,
) -> float:
    rng = rng if rng is not None else np.random.default_rng(node.id)
    level = expected_rssi(node.distance_to(receiver), frequency_khz)
    return float(level + rng.normal(0.0, noise_std)) if noise_std > 0 else level


def build_registry(
    nodes: Iterable[Node],
    receiver: Position,
    frequency_khz: float = 25.0,
    *,
    margin: float = MARGIN,
) -> RssiRegistry:
    """Registers expected level +/- `margin` for every node but the one at
    the receiver."""
    registry = RssiRegistry()
    for node in nodes:
        if node.is_sink:
            continue
        level = expected_rssi(node.distance_to(receiver), frequency_khz)
        registry.register(node.id, level - margin, level + margin)
    return registry


def rssi_within_range(registry: RssiRegistry, node_id: int, measured: float) -> bool:
    """True iff `measured` lies in the node's registered band, bounds
    included. Unregistered nodes are never in range."""
    band = registry.get(node_id)
    return band is not None and measured in band
