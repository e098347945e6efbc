# 2026/09/10
"""
kdqtree.py - Distribution change detection over a kdq-tree partition.

Defines KdqTree, the functions 'kl_divergence', 'kdqtree_build' and
'kdqtree_detect', and KdqSlidingDetector, which runs the test over a stream
of feature vectors.

Build: the reference window is mapped onto the unit cube through its
bounding box, then cells are halved at their midpoint along axes taken in
turn. A cell becomes a leaf when it holds at most 'count_bound' points,
when its side along the next axis would fall below 'min_side', or when all
its points coincide.

Detection: reference and test windows are binned over the leaves, both
histograms get 0.5 added per cell, and their KL divergence is compared with
the (1 - alpha) quantile of divergences between pairs of bootstrap
resamples of the reference. On drift, the leaf with the largest Kulldorff
scan statistic (test excess over the reference rate) locates the change.

"""

from __future__ import annotations

import logging
from collections import deque
from typing import Any

import numpy as np
from numpy.typing import ArrayLike
from scipy.special import rel_entr

from uwids.drift.base import DriftDetector, DriftSignal, SignalKind
from uwids.errors import ConfigurationError, DimensionError

logger = logging.getLogger(__name__)

WINDOW_SIZE = 500
ALPHA = 0.05
BOOTSTRAP_SAMPLES = 500
COUNT_BOUND = 50
MIN_SIDE = 2.0**-10
SMOOTHING = 0.5


def kl_divergence(p: ArrayLike, q: ArrayLike) -> float:
    """KL(p || q) in nats, for two distributions over the same cells."""
    p, q = np.asarray(p, dtype=float), np.asarray(q, dtype=float)
    if p.shape != q.shape:
        raise DimensionError(f"Distributions over {p.size} and {q.size} cells differ.")
    return float(rel_entr(p, q).sum())


class KdqTree:
    """Axis-aligned partition of a reference window.

    Nodes are stored in flat arrays; 'leaf_id[i]' is -1 for internal nodes.
    Points outside the reference bounding box are clipped into the boundary
    cells, so 'leaf_bounds' reports those faces as unbounded.

    """

    def __init__(
        self,
        reference: ArrayLike,
        *,
        count_bound: int = COUNT_BOUND,
        min_side: float = MIN_SIDE,
    ) -> None:
        reference = np.atleast_2d(np.asarray(reference, dtype=float))
        if reference.shape[0] == 0:
            raise ConfigurationError("Cannot build a kdq-tree on an empty window.")
        if count_bound < 1:
            raise ConfigurationError(f"count_bound must be positive, not '{count_bound}'.")
        self.count_bound = count_bound
        self.min_side = min_side
        self.window_size, self.dim = reference.shape
        self.origin = reference.min(axis=0)
        span = reference.max(axis=0) - self.origin
        self.span = np.where(span > 0, span, 1.0)

        self.axis: list[int] = []
        self.split: list[float] = []
        self.left: list[int] = []
        self.right: list[int] = []
        self.leaf_id: list[int] = []
        self._leaf_boxes: list[tuple[np.ndarray, np.ndarray]] = []
        self._grow(self.normalize(reference))

        self.reference_leaves = self.leaves_of(reference)
        self.reference_counts = np.bincount(self.reference_leaves, minlength=self.n_leaves)
        self._thresholds: dict[tuple[float, int, int], float] = {}

    @property
    def n_leaves(self) -> int:
        return len(self._leaf_boxes)

    def normalize(self, points: np.ndarray) -> np.ndarray:
        return np.clip((points - self.origin) / self.span, 0.0, 1.0)

    def leaves_of(self, points: ArrayLike) -> np.ndarray:
        """Leaf id of every row of `points`."""
        points = np.atleast_2d(np.asarray(points, dtype=float))
        if points.shape[1] != self.dim:
            raise DimensionError(f"Tree has {self.dim} dimensions, points have {points.shape[1]}.")
        unit = self.normalize(points)
        axis, split = np.asarray(self.axis), np.asarray(self.split)
        left, right = np.asarray(self.left), np.asarray(self.right)
        leaf_id = np.asarray(self.leaf_id)

        node = np.zeros(len(unit), dtype=int)
        rows = np.arange(len(unit))
        inner = leaf_id[node] < 0
        while inner.any():
            cur = node[inner]
            go_right = unit[rows[inner], axis[cur]] >= split[cur]
            node[inner] = np.where(go_right, right[cur], left[cur])
            inner = leaf_id[node] < 0
        return leaf_id[node]

    def counts(self, points: ArrayLike) -> np.ndarray:
        return np.bincount(self.leaves_of(points), minlength=self.n_leaves)

    def leaf_bounds(self, leaf: int) -> tuple[list[float | None], list[float | None]]:
        """Lower and upper corners of a leaf in input units; None marks an
        unbounded edge."""
        lo, hi = self._leaf_boxes[leaf]
        corner = [float(self.origin[k] + lo[k] * self.span[k]) for k in range(self.dim)]
        lower = [None if lo[k] <= 0.0 else corner[k] for k in range(self.dim)]
        corner = [float(self.origin[k] + hi[k] * self.span[k]) for k in range(self.dim)]
        upper = [None if hi[k] >= 1.0 else corner[k] for k in range(self.dim)]
        return lower, upper

    def threshold(
        self, alpha: float = ALPHA, bootstrap_samples: int = BOOTSTRAP_SAMPLES, seed: int = 0
    ) -> float:
        """(1 - alpha) quantile of reference-vs-reference divergences."""
        key = (alpha, bootstrap_samples, seed)
        if key not in self._thresholds:
            rng = np.random.default_rng(seed)
            n = self.window_size
            values = np.empty(bootstrap_samples)
            for b in range(bootstrap_samples):
                draw = self.reference_leaves[rng.integers(0, n, size=2 * n)]
                first = np.bincount(draw[:n], minlength=self.n_leaves)
                second = np.bincount(draw[n:], minlength=self.n_leaves)
                values[b] = kl_divergence(_smoothed(first), _smoothed(second))
            self._thresholds[key] = float(np.quantile(values, 1.0 - alpha))
        return self._thresholds[key]

    def scan(self, test_counts: np.ndarray) -> tuple[int, float]:
        """Leaf with the largest Kulldorff log-likelihood ratio, and the ratio.

        Only cells where the test window is denser than the reference rate
        predicts score above zero.

        """
        total = float(test_counts.sum())
        expected = total * self.reference_counts / self.reference_counts.sum()
        t = test_counts.astype(float)
        with np.errstate(divide="ignore", invalid="ignore"):
            inside = np.where(t > 0, t * np.log(t / expected), 0.0)
            rest = total - t
            outside = np.where(rest > 0, rest * np.log(rest / (total - expected)), 0.0)
            llr = np.where(t > expected, inside + outside, 0.0)
        # Cells empty in the reference have an infinite ratio as soon as the
        # test window lands there
        llr = np.nan_to_num(llr, nan=0.0, posinf=np.finfo(float).max)
        leaf = int(np.argmax(llr))
        return leaf, float(llr[leaf])

    # Auxiliar methods

    def _grow(self, unit: np.ndarray) -> None:
        root = self._new_node()
        stack = [(root, np.arange(len(unit)), np.zeros(self.dim), np.ones(self.dim), 0)]
        while stack:
            node, idx, lo, hi, depth = stack.pop()
            axis = depth % self.dim
            side = (hi[axis] - lo[axis]) / 2.0
            pts = unit[idx]
            if (
                len(idx) <= self.count_bound
                or side < self.min_side
                or np.all(pts == pts[0])
            ):
                self.leaf_id[node] = len(self._leaf_boxes)
                self._leaf_boxes.append((lo, hi))
                continue

            mid = (lo[axis] + hi[axis]) / 2.0
            upper = pts[:, axis] >= mid
            left, right = self._new_node(), self._new_node()
            self.axis[node], self.split[node] = axis, mid
            self.left[node], self.right[node] = left, right
            left_hi, right_lo = hi.copy(), lo.copy()
            left_hi[axis] = mid
            right_lo[axis] = mid
            stack.append((right, idx[upper], right_lo, hi, depth + 1))
            stack.append((left, idx[~upper], lo, left_hi, depth + 1))

    def _new_node(self) -> int:
        self.axis.append(0)
        self.split.append(0.0)
        self.left.append(-1)
        self.right.append(-1)
        self.leaf_id.append(-1)
        return len(self.leaf_id) - 1

    def __repr__(self) -> str:
        return f"<KdqTree dim={self.dim} window={self.window_size} leaves={self.n_leaves}>"


def kdqtree_build(
    reference: ArrayLike, *, count_bound: int = COUNT_BOUND, min_side: float = MIN_SIDE
) -> KdqTree:
    return KdqTree(reference, count_bound=count_bound, min_side=min_side)


def kdqtree_detect(
    tree: KdqTree,
    test: ArrayLike,
    alpha: float = ALPHA,
    bootstrap_samples: int = BOOTSTRAP_SAMPLES,
    *,
    position: int = 0,
    seed: int = 0,
) -> DriftSignal:
    """Compares a test window with the tree's reference window."""
    test = np.atleast_2d(np.asarray(test, dtype=float))
    if len(test) != tree.window_size:
        raise DimensionError(
            f"Test window has {len(test)} points, reference has {tree.window_size}."
        )
    counts = tree.counts(test)
    divergence = kl_divergence(_smoothed(tree.reference_counts), _smoothed(counts))
    limit = tree.threshold(alpha, bootstrap_samples, seed)
    detail: dict[str, Any] = {"kl": divergence, "threshold": limit}
    if divergence <= limit:
        return DriftSignal(SignalKind.STABLE, position, detail)

    leaf, llr = tree.scan(counts)
    lower, upper = tree.leaf_bounds(leaf)
    detail.update({"leaf": leaf, "llr": llr, "lower": lower, "upper": upper})
    return DriftSignal(SignalKind.DRIFT, position, detail)


class KdqSlidingDetector(DriftDetector):
    """kdq-tree test over a stream of vectors.

    The first 'window_size' vectors form the reference. The following ones
    fill a test window of the same size, tested every 'stride' vectors once
    full. On drift, the test window becomes the new reference.

    """

    name = "kdqtree"

    def __init__(
        self,
        window_size: int = WINDOW_SIZE,
        alpha: float = ALPHA,
        bootstrap_samples: int = BOOTSTRAP_SAMPLES,
        count_bound: int = COUNT_BOUND,
        *,
        stride: int = 100,
        seed: int = 0,
    ) -> None:
        super().__init__()
        if window_size < 2 or stride < 1:
            raise ConfigurationError("kdq window_size must be >= 2 and stride >= 1.")
        self.window_size = window_size
        self.alpha = alpha
        self.bootstrap_samples = bootstrap_samples
        self.count_bound = count_bound
        self.stride = stride
        self.seed = seed
        self.reset()

    def reset(self) -> None:
        self.tree: KdqTree | None = None
        self.window: deque[np.ndarray] = deque(maxlen=self.window_size)
        self._since_test = 0

    def update(self, value: ArrayLike) -> DriftSignal:
        self.n_seen += 1
        self.window.append(np.asarray(value, dtype=float).ravel())
        if self.tree is None:
            if len(self.window) == self.window_size:
                self._rebuild()
            return self._signal(SignalKind.STABLE)

        self._since_test += 1
        if len(self.window) < self.window_size or self._since_test < self.stride:
            return self._signal(SignalKind.STABLE)
        self._since_test = 0
        signal = kdqtree_detect(
            self.tree,
            np.vstack(self.window),
            self.alpha,
            self.bootstrap_samples,
            position=self.n_seen - 1,
            seed=self.seed,
        )
        if signal.is_drift:
            logger.info("kdq-tree drift at %d (kl=%.4f)", signal.position, signal.detail["kl"])
            self._rebuild()
        return signal

    def _rebuild(self) -> None:
        self.tree = KdqTree(np.vstack(self.window), count_bound=self.count_bound)
        self.window.clear()
        self._since_test = 0


# Auxiliar functions


def _smoothed(counts: np.ndarray) -> np.ndarray:
    smoothed = counts + SMOOTHING
    return smoothed / smoothed.sum()
