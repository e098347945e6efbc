# 2026/09/26
"""
test_31_hoeffding.py - Tests for the Hoeffding tree
"""

import json

import numpy as np
import pytest

from uwids.errors import ConfigurationError, DimensionError, ModelError
from uwids.learn import HoeffdingTree, hoeffding_bound, ht_learn_one, ht_predict
from uwids.learn.hoeffding import Split


def _threshold_stream(n, seed):
    rng = np.random.default_rng(seed)
    x = rng.random((n, 3))
    return x, (x[:, 0] >= 0.5).astype(int)


@pytest.fixture(scope="module")
def trained():
    tree = HoeffdingTree(3, 2)
    x, y = _threshold_stream(2000, 31)
    for row, label in zip(x, y):
        ht_learn_one(tree, row, label)
    return tree


def test_hoeffding_bound():
    assert hoeffding_bound(1.0, 0.05, 100) == pytest.approx(0.12239, abs=1e-5)
    # Shrinks with more samples
    assert hoeffding_bound(1.0, 0.05, 400) == pytest.approx(hoeffding_bound(1.0, 0.05, 100) / 2)

    with pytest.raises(ConfigurationError):
        hoeffding_bound(0.0, 0.05, 10)
    with pytest.raises(ConfigurationError):
        hoeffding_bound(1.0, 1.0, 10)
    with pytest.raises(ConfigurationError):
        hoeffding_bound(1.0, 0.05, 0)


def test_empty_tree():
    tree = HoeffdingTree(2, 3)
    label, distribution = ht_predict(tree, [0.1, 0.2])
    assert label == 0
    assert np.allclose(distribution, 1 / 3)
    assert tree.n_leaves == 1 and tree.depth == 0


def test_learns_threshold(trained):
    assert trained.n_seen == 2000
    assert trained.n_splits >= 1
    assert isinstance(trained.root, Split)
    assert trained.root.feature == 0
    assert abs(trained.root.threshold - 0.5) < 0.1

    x, y = _threshold_stream(500, 32)
    predicted = np.array([ht_predict(trained, row)[0] for row in x])
    assert np.mean(predicted == y) >= 0.9


def test_weighted_learning():
    tree = HoeffdingTree(1, 2, grace_period=10)
    tree.learn_one([0.3], 1, weight=4.0)
    tree.learn_one([0.7], 0, weight=0.0)
    assert tree.n_seen == 4.0
    label, distribution = tree.predict_one([0.9])
    assert label == 1
    assert distribution.tolist() == [0.0, 1.0]


def test_bad_input():
    tree = HoeffdingTree(2, 2)
    with pytest.raises(ModelError):
        tree.learn_one([0.0, 1.0], 2)
    with pytest.raises(DimensionError):
        tree.learn_one([0.0, 1.0, 2.0], 0)
    with pytest.raises(DimensionError):
        tree.predict_one([0.0])

    with pytest.raises(ConfigurationError):
        HoeffdingTree(2, 1)
    with pytest.raises(ConfigurationError):
        HoeffdingTree(2, 2, grace_period=0)
    with pytest.raises(ConfigurationError):
        HoeffdingTree(2, 2, split_confidence=1.5)


def test_feature_subsets():
    tree = HoeffdingTree(8, 2, max_features=3, rng=np.random.default_rng(1))
    chosen = tree._candidate_features()
    assert len(chosen) == 3
    assert len(set(chosen)) == 3

    assert HoeffdingTree(4, 2, max_features=9).max_features is None


def test_to_dict(trained):
    data = json.loads(json.dumps(trained.to_dict()))
    copy = HoeffdingTree.from_dict(data)
    assert copy.n_leaves == trained.n_leaves
    assert copy.n_splits == trained.n_splits

    x, _ = _threshold_stream(200, 33)
    for row in x:
        label, distribution = trained.predict_one(row)
        copy_label, copy_distribution = copy.predict_one(row)
        assert copy_label == label
        assert np.allclose(copy_distribution, distribution)
