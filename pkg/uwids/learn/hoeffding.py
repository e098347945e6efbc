# 2026/09/12
"""
hoeffding.py - Incremental decision tree for numeric features.

Defines the function 'hoeffding_bound' and the class HoeffdingTree, with its
node classes Leaf and Split.

Leaves keep, for every class, a weighted count and a Gaussian summary (mean
and sum of squared deviations) of every feature. Every 'grace_period'
weighted samples, a leaf holding more than one class tries to split: for each
candidate feature it evaluates 'n_thresholds' equally spaced thresholds over
the range seen at the leaf, estimating the class mass on each side from the
Gaussian summaries, and keeps the one with the largest information gain. The
split is made when the gain of the best feature exceeds the second best by
more than the Hoeffding bound, or when the bound itself drops below
'tie_threshold'.

Samples go to the left child when their value is at most the threshold.

"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np
from numpy.typing import ArrayLike
from scipy.special import entr
from scipy.stats import norm

from uwids.errors import ConfigurationError, DimensionError, ModelError

logger = logging.getLogger(__name__)

GRACE_PERIOD = 50
SPLIT_CONFIDENCE = 1e-3
TIE_THRESHOLD = 0.05
N_THRESHOLDS = 10


def hoeffding_bound(value_range: float, delta: float, n: float) -> float:
    """sqrt(R^2 ln(1/delta) / 2n)"""
    if value_range <= 0:
        raise ConfigurationError(f"Range must be positive, not '{value_range}'.")
    if not (0.0 < delta < 1.0):
        raise ConfigurationError(f"delta must lie in (0, 1), not '{delta}'.")
    if n < 1:
        raise ConfigurationError(f"The bound needs at least one sample, not '{n}'.")
    return math.sqrt(value_range**2 * math.log(1.0 / delta) / (2.0 * n))


@dataclass
class Leaf:
    """Per-class statistics of the samples routed to a leaf.

    'prior' is the class distribution estimated for the leaf when it was
    created by a split; it is only used to predict until the leaf sees data.

    """

    class_counts: np.ndarray
    means: np.ndarray
    sq_devs: np.ndarray
    low: np.ndarray
    high: np.ndarray
    prior: np.ndarray | None = None
    weight_at_attempt: float = 0.0
    depth: int = 0

    @classmethod
    def empty(cls, n_features: int, n_classes: int, depth: int = 0, prior=None) -> Leaf:
        return cls(
            class_counts=np.zeros(n_classes),
            means=np.zeros((n_features, n_classes)),
            sq_devs=np.zeros((n_features, n_classes)),
            low=np.full(n_features, np.inf),
            high=np.full(n_features, -np.inf),
            prior=prior,
            depth=depth,
        )

    @property
    def weight(self) -> float:
        return float(self.class_counts.sum())

    def learn(self, x: np.ndarray, y: int, weight: float) -> None:
        count = self.class_counts[y] + weight
        delta = x - self.means[:, y]
        self.means[:, y] += weight * delta / count
        self.sq_devs[:, y] += weight * delta * (x - self.means[:, y])
        self.class_counts[y] = count
        np.minimum(self.low, x, out=self.low)
        np.maximum(self.high, x, out=self.high)

    def distribution(self) -> np.ndarray:
        total = self.class_counts.sum()
        if total > 0:
            return self.class_counts / total
        if self.prior is not None:
            return self.prior
        n = len(self.class_counts)
        return np.full(n, 1.0 / n)

    def to_dict(self) -> dict[str, Any]:
        return {
            "class_counts": self.class_counts.tolist(),
            "means": self.means.tolist(),
            "sq_devs": self.sq_devs.tolist(),
            "low": _finite_list(self.low),
            "high": _finite_list(self.high),
            "prior": None if self.prior is None else self.prior.tolist(),
            "weight_at_attempt": self.weight_at_attempt,
            "depth": self.depth,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> Leaf:
        return cls(
            class_counts=np.asarray(data["class_counts"], dtype=float),
            means=np.asarray(data["means"], dtype=float),
            sq_devs=np.asarray(data["sq_devs"], dtype=float),
            low=_array_from(data["low"], np.inf),
            high=_array_from(data["high"], -np.inf),
            prior=None if data["prior"] is None else np.asarray(data["prior"], dtype=float),
            weight_at_attempt=data["weight_at_attempt"],
            depth=data["depth"],
        )


@dataclass
class Split:
    feature: int
    threshold: float
    left: Leaf | Split = field(repr=False)
    right: Leaf | Split = field(repr=False)

    def child(self, x: np.ndarray) -> Leaf | Split:
        return self.left if x[self.feature] <= self.threshold else self.right

    def to_dict(self) -> dict[str, Any]:
        return {
            "feature": self.feature,
            "threshold": self.threshold,
            "left": _node_to_dict(self.left),
            "right": _node_to_dict(self.right),
        }


class HoeffdingTree:
    """Hoeffding tree over 'n_features' numeric features and 'n_classes'
    integer labels (0 to n_classes - 1).

    'max_features' limits each split attempt to a random subset of that
    many features, drawn from 'rng'; None uses every feature.

    """

    def __init__(
        self,
        n_features: int,
        n_classes: int,
        *,
        grace_period: int = GRACE_PERIOD,
        split_confidence: float = SPLIT_CONFIDENCE,
        tie_threshold: float = TIE_THRESHOLD,
        n_thresholds: int = N_THRESHOLDS,
        max_features: int | None = None,
        rng: np.random.Generator | None = None,
    ) -> None:
        if n_features < 1 or n_classes < 2:
            raise ConfigurationError("A tree needs at least one feature and two classes.")
        if grace_period < 1 or n_thresholds < 1:
            raise ConfigurationError("grace_period and n_thresholds must be positive.")
        if not (0.0 < split_confidence < 1.0):
            raise ConfigurationError(
                f"split_confidence must lie in (0, 1), not '{split_confidence}'."
            )
        self.n_features = n_features
        self.n_classes = n_classes
        self.grace_period = grace_period
        self.split_confidence = split_confidence
        self.tie_threshold = tie_threshold
        self.n_thresholds = n_thresholds
        self.max_features = (
            None if max_features is None or max_features >= n_features else max_features
        )
        self.rng = rng if rng is not None else np.random.default_rng(0)
        self.root: Leaf | Split = Leaf.empty(n_features, n_classes)
        self.n_splits = 0
        self.n_seen = 0.0

    def learn_one(self, x: ArrayLike, y: int, weight: float = 1.0) -> None:
        """Routes one sample to its leaf, updates the leaf and attempts a split
        when the grace period has passed."""
        x = self._check(x)
        if not (0 <= y < self.n_classes) or int(y) != y:
            raise ModelError(f"Label '{y}' is outside 0..{self.n_classes - 1}.")
        if weight <= 0:
            return
        self.n_seen += weight
        parent, leaf = self._route(x)
        leaf.learn(x, int(y), weight)
        if leaf.weight - leaf.weight_at_attempt >= self.grace_period:
            leaf.weight_at_attempt = leaf.weight
            self._attempt_split(parent, leaf)

    def predict_one(self, x: ArrayLike) -> tuple[int, np.ndarray]:
        """Majority label at the reached leaf and the leaf's class
        distribution. Ties go to the lowest label."""
        _, leaf = self._route(self._check(x))
        distribution = leaf.distribution()
        return int(np.argmax(distribution)), distribution

    @property
    def n_leaves(self) -> int:
        return sum(1 for _ in _leaves(self.root))

    @property
    def depth(self) -> int:
        return max(leaf.depth for leaf in _leaves(self.root))

    def to_dict(self) -> dict[str, Any]:
        return {
            "n_features": self.n_features,
            "n_classes": self.n_classes,
            "grace_period": self.grace_period,
            "split_confidence": self.split_confidence,
            "tie_threshold": self.tie_threshold,
            "n_thresholds": self.n_thresholds,
            "max_features": self.max_features,
            "n_splits": self.n_splits,
            "n_seen": self.n_seen,
            "rng_state": self.rng.bit_generator.state,
            "root": _node_to_dict(self.root),
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> HoeffdingTree:
        rng = np.random.default_rng()
        rng.bit_generator.state = data["rng_state"]
        tree = cls(
            data["n_features"],
            data["n_classes"],
            grace_period=data["grace_period"],
            split_confidence=data["split_confidence"],
            tie_threshold=data["tie_threshold"],
            n_thresholds=data["n_thresholds"],
            max_features=data["max_features"],
            rng=rng,
        )
        tree.root = _node_from_dict(data["root"])
        tree.n_splits = data["n_splits"]
        tree.n_seen = data["n_seen"]
        return tree

    # Auxiliar methods

    def _check(self, x: ArrayLike) -> np.ndarray:
        x = np.asarray(x, dtype=float).ravel()
        if x.size != self.n_features:
            raise DimensionError(f"Tree expects {self.n_features} features, got {x.size}.")
        return x

    def _route(self, x: np.ndarray) -> tuple[Split | None, Leaf]:
        parent, node = None, self.root
        while isinstance(node, Split):
            parent, node = node, node.child(x)
        return parent, node

    def _candidate_features(self) -> np.ndarray:
        if self.max_features is None:
            return np.arange(self.n_features)
        return np.sort(self.rng.choice(self.n_features, size=self.max_features, replace=False))

    def _attempt_split(self, parent: Split | None, leaf: Leaf) -> None:
        if np.count_nonzero(leaf.class_counts) < 2:
            return
        parent_entropy = _entropy(leaf.class_counts)
        best_per_feature = []
        for feature in self._candidate_features():
            found = self._best_threshold(leaf, int(feature), parent_entropy)
            if found is not None:
                best_per_feature.append(found)
        if not best_per_feature:
            return

        best_per_feature.sort(key=lambda item: item[0], reverse=True)
        best_gain, feature, threshold, left_mass, right_mass = best_per_feature[0]
        second_gain = best_per_feature[1][0] if len(best_per_feature) > 1 else 0.0
        epsilon = hoeffding_bound(math.log2(self.n_classes), self.split_confidence, leaf.weight)
        if best_gain <= 0 or not (
            best_gain - second_gain > epsilon or epsilon < self.tie_threshold
        ):
            return

        split = Split(
            feature,
            threshold,
            Leaf.empty(self.n_features, self.n_classes, leaf.depth + 1, _normalized(left_mass)),
            Leaf.empty(self.n_features, self.n_classes, leaf.depth + 1, _normalized(right_mass)),
        )
        if parent is None:
            self.root = split
        elif parent.left is leaf:
            parent.left = split
        else:
            parent.right = split
        self.n_splits += 1
        logger.debug(
            "Split on feature %d at %.6g (gain %.4f, bound %.4f)",
            feature,
            threshold,
            best_gain,
            epsilon,
        )

    def _best_threshold(self, leaf: Leaf, feature: int, parent_entropy: float):
        """(gain, feature, threshold, left mass, right mass) of the best
        candidate threshold, or None when the feature is constant."""
        low, high = leaf.low[feature], leaf.high[feature]
        if not (high > low):
            return None
        steps = np.arange(1, self.n_thresholds + 1) / (self.n_thresholds + 1)
        thresholds = low + (high - low) * steps

        counts = leaf.class_counts
        means = leaf.means[feature]
        with np.errstate(divide="ignore", invalid="ignore"):
            stds = np.sqrt(np.where(counts > 0, leaf.sq_devs[feature] / counts, 0.0))
            z = (thresholds[:, None] - means[None, :]) / stds[None, :]
        below = np.where(stds[None, :] > 0, norm.cdf(z), means[None, :] <= thresholds[:, None])
        left = below * counts[None, :]
        right = counts[None, :] - left

        total = counts.sum()
        children = (
            left.sum(axis=1) * _entropy_rows(left) + right.sum(axis=1) * _entropy_rows(right)
        ) / total
        gains = parent_entropy - children
        best = int(np.argmax(gains))
        return float(gains[best]), feature, float(thresholds[best]), left[best], right[best]

    def __repr__(self) -> str:
        return (
            f"<HoeffdingTree features={self.n_features} classes={self.n_classes} "
            f"leaves={self.n_leaves} seen={self.n_seen:g}>"
        )


def ht_learn_one(tree: HoeffdingTree, x: ArrayLike, y: int) -> None:
    tree.learn_one(x, y)


def ht_predict(tree: HoeffdingTree, x: ArrayLike) -> tuple[int, np.ndarray]:
    return tree.predict_one(x)


# Auxiliar functions


def _entropy(counts: np.ndarray) -> float:
    return float(_entropy_rows(counts[None, :])[0])


def _entropy_rows(counts: np.ndarray) -> np.ndarray:
    """Entropy in bits of each row of class masses; 0 for empty rows."""
    totals = counts.sum(axis=1, keepdims=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        p = np.where(totals > 0, counts / totals, 0.0)
    return entr(p).sum(axis=1) / math.log(2)


def _normalized(mass: np.ndarray) -> np.ndarray | None:
    total = mass.sum()
    return mass / total if total > 0 else None


def _leaves(node: Leaf | Split):
    stack = [node]
    while stack:
        node = stack.pop()
        if isinstance(node, Split):
            stack.extend((node.right, node.left))
        else:
            yield node


def _node_to_dict(node: Leaf | Split) -> dict[str, Any]:
    kind = "split" if isinstance(node, Split) else "leaf"
    return {"node": kind, **node.to_dict()}


def _node_from_dict(data: dict[str, Any]) -> Leaf | Split:
    if data["node"] == "leaf":
        return Leaf.from_dict(data)
    return Split(
        data["feature"],
        data["threshold"],
        _node_from_dict(data["left"]),
        _node_from_dict(data["right"]),
    )


def _finite_list(values: np.ndarray) -> list[float | None]:
    return [float(v) if np.isfinite(v) else None for v in values]


def _array_from(values: list[float | None], missing: float) -> np.ndarray:
    return np.array([missing if v is None else v for v in values], dtype=float)
