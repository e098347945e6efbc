# 2026/09/13
"""
forest.py - Adaptive random forest.

Defines ForestConfig, ForestMember, ForestModel and the functions
'arf_learn_one' and 'arf_predict'.

Each member is a foreground Hoeffding tree with its own random generator,
vote weight and drift detectors fed with the tree's 0/1 error (by default
two ADWIN instances, a loose one for warnings and a strict one for drifts):
- a warning on the looser detector starts a background tree, which trains
  alongside the foreground one from then on;
- a drift on the stricter one replaces the foreground tree by its background
  (or by a fresh tree when there is none) and resets both detectors.

Replaced trees go to a bounded archive. Trees see each sample with a
multiplicity drawn from Poisson('lambda_poisson'), and restrict every split
attempt to a random subset of 'max_features' features.

"""

from __future__ import annotations

import logging
import math
from collections import deque
from dataclasses import asdict, dataclass, fields
from typing import Any

import numpy as np
from numpy.typing import ArrayLike

from uwids.drift.adwin import AdwinState
from uwids.drift.base import DriftDetector
from uwids.drift.ddm import DdmState
from uwids.drift.kswin import KswinState
from uwids.drift.page_hinkley import PageHinkleyState
from uwids.errors import ConfigurationError, ModelError
from uwids.learn.hoeffding import HoeffdingTree

logger = logging.getLogger(__name__)

TREE_DETECTORS = ("adwin", "ddm", "kswin", "page_hinkley")


@dataclass
class ForestConfig:
    n_trees: int = 50
    max_features: int | str | None = "log2"
    lambda_poisson: float = 6.0
    resample: bool = True
    detectors: bool = True
    drift_detector: str = "adwin"
    delta_warning: float = 0.01
    delta_drift: float = 0.001
    grace_period: int = 50
    split_confidence: float = 0.001
    tie_threshold: float = 0.05
    n_thresholds: int = 10
    weight_decay: float = 0.99
    archive_capacity: int = 4
    seed: int = 0

    def __post_init__(self) -> None:
        self.validate()

    def validate(self) -> None:
        if self.n_trees < 1:
            raise ConfigurationError(f"n_trees must be positive, not '{self.n_trees}'.")
        if self.lambda_poisson <= 0:
            raise ConfigurationError("lambda_poisson must be positive.")
        if not (0.0 < self.delta_drift <= self.delta_warning < 1.0):
            raise ConfigurationError("Forest detectors need 0 < delta_drift <= delta_warning < 1.")
        if not (0.0 < self.weight_decay < 1.0):
            raise ConfigurationError("weight_decay must lie in (0, 1).")
        if self.drift_detector not in TREE_DETECTORS:
            raise ConfigurationError(
                f"drift_detector must be one of {', '.join(TREE_DETECTORS)}, "
                f"not '{self.drift_detector}'."
            )
        if self.archive_capacity < 0:
            raise ConfigurationError("archive_capacity cannot be negative.")
        if isinstance(self.max_features, str) and self.max_features not in ("log2", "sqrt"):
            raise ConfigurationError(
                f"max_features must be an integer, 'log2', 'sqrt' or None, "
                f"not '{self.max_features}'."
            )

    def features_per_split(self, n_features: int) -> int:
        """Size of the feature subset drawn at every split attempt."""
        if self.max_features is None:
            return n_features
        if self.max_features == "log2":
            size = math.ceil(math.log2(n_features)) if n_features > 1 else 1
        elif self.max_features == "sqrt":
            size = math.ceil(math.sqrt(n_features))
        else:
            size = int(self.max_features)
        return max(1, min(n_features, size))

    @classmethod
    def from_mapping(cls, mapping: dict[str, Any]) -> ForestConfig:
        unknown = set(mapping) - {f.name for f in fields(cls)}
        if unknown:
            raise ConfigurationError(f"Unknown forest keys: {', '.join(sorted(unknown))}.")
        return cls(**mapping)

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


class ForestMember:
    """One slot of the forest: foreground tree, optional background tree,
    vote weight and detectors."""

    def __init__(self, forest: ForestModel, index: int) -> None:
        self.index = index
        self.generation = 0
        self.rng = np.random.default_rng([forest.config.seed, index])
        self.tree = forest.new_tree(self.rng)
        self.background: HoeffdingTree | None = None
        self.weight = 0.0
        self.n_scored = 0
        self.warning_detector, self.drift_detector = _tree_detectors(forest.config)

    def watch(self, error: float) -> tuple[bool, bool]:
        """Feeds the tree's error to its detectors; returns (warning, drift)."""
        signal = self.drift_detector.update(error)
        warning = signal.is_warning
        if self.warning_detector is not None:
            warning = self.warning_detector.update(error).is_drift or warning
        return warning, signal.is_drift

    def reset_detectors(self) -> None:
        if self.warning_detector is not None:
            self.warning_detector.reset()
        self.drift_detector.reset()


class ForestModel:
    """Adaptive random forest over 'n_features' numeric features and
    'n_classes' labels."""

    def __init__(
        self, n_features: int, n_classes: int, config: ForestConfig | None = None
    ) -> None:
        if n_features < 1 or n_classes < 2:
            raise ConfigurationError("A forest needs at least one feature and two classes.")
        self.config = config or ForestConfig()
        self.n_features = n_features
        self.n_classes = n_classes
        self.subspace = self.config.features_per_split(n_features)
        self.members = [ForestMember(self, i) for i in range(self.config.n_trees)]
        self.archive: deque[HoeffdingTree] = deque(maxlen=self.config.archive_capacity)
        self.n_seen = 0
        self.n_warnings = 0
        self.n_drifts = 0
        self.replacements: list[tuple[int, int]] = []

    @property
    def trees(self) -> list[HoeffdingTree]:
        return [member.tree for member in self.members]

    @property
    def weights(self) -> np.ndarray:
        return np.array([member.weight for member in self.members])

    @property
    def n_background(self) -> int:
        return sum(member.background is not None for member in self.members)

    def new_tree(self, rng: np.random.Generator) -> HoeffdingTree:
        return HoeffdingTree(
            self.n_features,
            self.n_classes,
            grace_period=self.config.grace_period,
            split_confidence=self.config.split_confidence,
            tie_threshold=self.config.tie_threshold,
            n_thresholds=self.config.n_thresholds,
            max_features=self.subspace,
            rng=rng,
        )

    def predict_one(self, x: ArrayLike) -> tuple[int, np.ndarray]:
        """Weighted vote of the foreground trees.

        Returns the winning label (the lowest one on ties) and the vote mass
        per label. Trees count equally while no weight is positive.

        """
        votes = np.zeros(self.n_classes)
        labels = [member.tree.predict_one(x)[0] for member in self.members]
        weights = self.weights
        if not np.any(weights > 0):
            weights = np.ones(len(labels))
        np.add.at(votes, labels, weights)
        return int(np.argmax(votes)), votes

    def learn_one(self, x: ArrayLike, y: int) -> dict[str, int]:
        """Trains every member on one labelled sample.

        Returns the number of warnings and drifts raised by the members on
        this sample.

        """
        if not (0 <= y < self.n_classes):
            raise ModelError(f"Label '{y}' is outside 0..{self.n_classes - 1}.")
        x = np.asarray(x, dtype=float).ravel()
        self.n_seen += 1
        summary = {"warnings": 0, "drifts": 0}
        decay = self.config.weight_decay
        for member in self.members:
            correct = member.tree.predict_one(x)[0] == y
            member.weight = decay * member.weight + (1.0 - decay) * float(correct)
            member.n_scored += 1

            if self.config.detectors:
                warning, drift = member.watch(0.0 if correct else 1.0)
                if warning:
                    self._start_background(member)
                    summary["warnings"] += 1
                if drift:
                    if member.background is None:
                        self._start_background(member)
                        summary["warnings"] += 1
                    self._replace(member)
                    summary["drifts"] += 1

            k = int(member.rng.poisson(self.config.lambda_poisson)) if self.config.resample else 1
            if k > 0:
                member.tree.learn_one(x, y, k)
                if member.background is not None:
                    member.background.learn_one(x, y, k)

        self.n_warnings += summary["warnings"]
        self.n_drifts += summary["drifts"]
        return summary

    def force_warning(self) -> int:
        """Starts a background tree in every member lacking one, as if each
        had raised a warning. Returns how many were started."""
        started = 0
        for member in self.members:
            if member.background is None:
                self._start_background(member)
                started += 1
        self.n_warnings += started
        return started

    # Auxiliar methods

    def _start_background(self, member: ForestMember) -> None:
        if member.background is None:
            member.background = self.new_tree(member.rng)

    def _replace(self, member: ForestMember) -> None:
        self.archive.append(member.tree)
        member.tree = member.background
        member.background = None
        member.weight = 0.0
        member.n_scored = 0
        member.generation += 1
        member.reset_detectors()
        self.replacements.append((self.n_seen - 1, member.index))
        logger.info(
            "Tree %d replaced at sample %d (generation %d)",
            member.index,
            self.n_seen - 1,
            member.generation,
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "n_features": self.n_features,
            "n_classes": self.n_classes,
            "config": self.config.to_dict(),
            "n_seen": self.n_seen,
            "n_warnings": self.n_warnings,
            "n_drifts": self.n_drifts,
            "members": [
                {
                    "generation": m.generation,
                    "weight": m.weight,
                    "n_scored": m.n_scored,
                    "rng_state": m.rng.bit_generator.state,
                    "tree": m.tree.to_dict(),
                }
                for m in self.members
            ],
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> ForestModel:
        """Rebuilds the foreground forest. Background trees, detectors and
        the archive start empty."""
        forest = cls(
            data["n_features"], data["n_classes"], ForestConfig.from_mapping(data["config"])
        )
        if len(data["members"]) != len(forest.members):
            raise ConfigurationError("Checkpoint tree count does not match its config.")
        for member, saved in zip(forest.members, data["members"]):
            member.generation = saved["generation"]
            member.weight = saved["weight"]
            member.n_scored = saved["n_scored"]
            member.rng.bit_generator.state = saved["rng_state"]
            member.tree = HoeffdingTree.from_dict(saved["tree"])
            member.tree.rng = member.rng
        forest.n_seen = data["n_seen"]
        forest.n_warnings = data["n_warnings"]
        forest.n_drifts = data["n_drifts"]
        return forest

    def __repr__(self) -> str:
        return (
            f"<ForestModel trees={len(self.members)} seen={self.n_seen} "
            f"drifts={self.n_drifts}>"
        )


def arf_learn_one(forest: ForestModel, x: ArrayLike, y: int) -> dict[str, int]:
    return forest.learn_one(x, y)


def arf_predict(forest: ForestModel, x: ArrayLike) -> tuple[int, np.ndarray]:
    return forest.predict_one(x)


# Auxiliar functions


def _tree_detectors(config: ForestConfig) -> tuple[DriftDetector | None, DriftDetector]:
    """(warning detector, drift detector) of one tree.

    ADWIN runs twice, at the warning and the drift confidence. DDM reports
    both levels itself. KSWIN and Page-Hinkley only report drifts.

    """
    name = config.drift_detector
    if name == "adwin":
        return AdwinState(config.delta_warning, None), AdwinState(config.delta_drift, None)
    if name == "ddm":
        return None, DdmState()
    if name == "kswin":
        return None, KswinState(seed=config.seed)
    return None, PageHinkleyState()
