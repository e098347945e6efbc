# 2026/09/09
"""
adwin.py - Adaptive windowing drift detector.

Defines AdwinState and 'adwin_update'.

The window is an exponential histogram: row i holds buckets that summarize
2^i consecutive samples (their total and the sum of squared deviations),
with at most 'max_buckets' buckets per row. Every 'clock' samples, every
split of the window into an older and a newer part is tested; when the means
differ by more than the cut threshold for confidence 'delta', the oldest
bucket is dropped and the test repeats. A split that only passes the looser
'delta_warning' threshold raises a warning and leaves the window untouched.

"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Iterator

from uwids.drift.base import DriftDetector, DriftSignal, SignalKind
from uwids.errors import ConfigurationError, InputRangeError


@dataclass
class Bucket:
    total: float
    variance: float


class AdwinState(DriftDetector):
    """ADWIN with a drift level and an optional warning level."""

    name = "adwin"

    def __init__(
        self,
        delta: float = 0.001,
        delta_warning: float | None = 0.01,
        *,
        clock: int = 32,
        max_buckets: int = 5,
        min_window: int = 10,
        min_sub_window: int = 5,
    ) -> None:
        super().__init__()
        if not (0.0 < delta < 1.0):
            raise ConfigurationError(f"delta must lie in (0, 1), not '{delta}'.")
        if delta_warning is not None and not (delta <= delta_warning < 1.0):
            raise ConfigurationError(
                f"delta_warning must lie in [delta, 1), not '{delta_warning}'."
            )
        if clock < 1 or max_buckets < 2:
            raise ConfigurationError("clock must be >= 1 and max_buckets >= 2.")
        self.delta = delta
        self.delta_warning = delta_warning
        self.clock = clock
        self.max_buckets = max_buckets
        self.min_window = min_window
        self.min_sub_window = min_sub_window
        self.reset()

    def reset(self) -> None:
        self.rows: list[deque[Bucket]] = [deque()]
        self.width = 0
        self.total = 0.0
        self.variance = 0.0
        self._ticks = 0

    @property
    def mean(self) -> float:
        return self.total / self.width if self.width else 0.0

    @property
    def bucket_count(self) -> int:
        return sum(len(row) for row in self.rows)

    def update(self, value: float) -> DriftSignal:
        if not (0.0 <= value <= 1.0):
            raise InputRangeError(f"ADWIN accepts values in [0, 1], not '{value}'.")
        self.n_seen += 1
        self._ticks += 1
        self._insert(float(value))

        if self._ticks % self.clock or self.width <= self.min_window:
            return self._signal(SignalKind.STABLE)
        if self._shrink():
            return self._signal(SignalKind.DRIFT, {"width": self.width})
        if self.delta_warning is not None and self._has_cut(self.delta_warning):
            return self._signal(SignalKind.WARNING, {"width": self.width})
        return self._signal(SignalKind.STABLE)

    # Histogram maintenance

    def _insert(self, value: float) -> None:
        if self.width:
            self.variance += self.width * (value - self.mean) ** 2 / (self.width + 1)
        self.width += 1
        self.total += value
        self.rows[0].append(Bucket(value, 0.0))

        level = 0
        while len(self.rows[level]) > self.max_buckets:
            older = self.rows[level].popleft()
            newer = self.rows[level].popleft()
            size = 2**level
            spread = size * size * (older.total / size - newer.total / size) ** 2 / (2 * size)
            if level + 1 == len(self.rows):
                self.rows.append(deque())
            self.rows[level + 1].append(
                Bucket(older.total + newer.total, older.variance + newer.variance + spread)
            )
            level += 1

    def _drop_oldest(self) -> None:
        while len(self.rows) > 1 and not self.rows[-1]:
            self.rows.pop()
        level = len(self.rows) - 1
        bucket = self.rows[level].popleft()
        size = 2**level
        self.width -= size
        self.total -= bucket.total
        if self.width:
            spread = (
                size * self.width * (bucket.total / size - self.mean) ** 2 / (size + self.width)
            )
            self.variance = max(0.0, self.variance - bucket.variance - spread)
        else:
            self.variance = 0.0
        while len(self.rows) > 1 and not self.rows[-1]:
            self.rows.pop()

    # Cut tests

    def _splits(self) -> Iterator[tuple[int, int, float]]:
        """(n_old, n_new, mean difference) for each split, oldest first."""
        n_old, sum_old = 0, 0.0
        for level in range(len(self.rows) - 1, -1, -1):
            size = 2**level
            for bucket in self.rows[level]:
                n_old += size
                sum_old += bucket.total
                n_new = self.width - n_old
                if n_new <= 0:
                    return
                yield n_old, n_new, sum_old / n_old - (self.total - sum_old) / n_new

    def _is_cut(self, n_old: int, n_new: int, diff: float, delta: float) -> bool:
        floor = self.min_sub_window + 1
        if n_old <= floor or n_new <= floor:
            return False
        m = 1.0 / (n_old - self.min_sub_window + 1) + 1.0 / (n_new - self.min_sub_window + 1)
        d = math.log(2.0 * math.log(self.width) / delta)
        epsilon = math.sqrt(2.0 * m * (self.variance / self.width) * d) + 2.0 / 3.0 * m * d
        return abs(diff) > epsilon

    def _has_cut(self, delta: float) -> bool:
        return any(self._is_cut(n0, n1, diff, delta) for n0, n1, diff in self._splits())

    def _shrink(self) -> bool:
        changed = False
        while self.width > self.min_window and self._has_cut(self.delta):
            self._drop_oldest()
            changed = True
        return changed


def adwin_update(state: AdwinState, value: float) -> DriftSignal:
    """Feeds one value in [0, 1] to `state`."""
    return state.update(value)
