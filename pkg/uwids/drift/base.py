# 2026/09/09
"""
base.py - Drift signals and the detector interface.

Defines SignalKind, DriftSignal and the abstract class DriftDetector, which
every streaming detector implements.

"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from enum import Enum
from typing import Any


class SignalKind(str, Enum):
    STABLE = "stable"
    WARNING = "warning"
    DRIFT = "drift"


@dataclass(frozen=True)
class DriftSignal:
    """Detector output for one sample.

    'position' is the index of the sample in the detector's stream, 0 for
    the first. 'detail' carries detector-specific data, such as the region
    located by a kdq-tree.

    """

    kind: SignalKind
    position: int
    detail: dict[str, Any] | None = field(default=None, compare=False)

    @property
    def is_drift(self) -> bool:
        return self.kind == SignalKind.DRIFT

    @property
    def is_warning(self) -> bool:
        return self.kind == SignalKind.WARNING

    def to_dict(self) -> dict[str, Any]:
        return {"position": self.position, "kind": self.kind.value, "detail": self.detail}


class DriftDetector(ABC):
    """Base class for streaming drift detectors.

    Requires subclasses to implement:
    - 'update(value)', which consumes one sample and returns a DriftSignal.
    - 'reset()', which forgets every sample seen.

    'n_seen' counts the samples consumed since creation; it is not reset, so
    signal positions keep increasing across resets.

    """

    name = "detector"

    def __init__(self) -> None:
        self.n_seen = 0

    @abstractmethod
    def update(self, value: float) -> DriftSignal:
        pass

    @abstractmethod
    def reset(self) -> None:
        pass

    def _signal(self, kind: SignalKind, detail: dict[str, Any] | None = None) -> DriftSignal:
        return DriftSignal(kind, self.n_seen - 1, detail)

    def __repr__(self) -> str:
        return f"<{self.__class__.__name__} seen={self.n_seen}>"
