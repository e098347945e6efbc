# 2026/09/26
"""
test_32_forest.py - Tests for the adaptive random forest
"""

import numpy as np
import pytest

from uwids.drift import label_flip_stream
from uwids.errors import ConfigurationError, ModelError
from uwids.learn import ForestConfig, ForestModel, arf_learn_one, arf_predict


def _small(**kwargs):
    return ForestConfig(**{"n_trees": 5, "seed": 7, **kwargs})


# Configuration


def test_config():
    config = ForestConfig()
    assert config.n_trees == 50
    assert config.lambda_poisson == 6.0
    assert config.features_per_split(12) == 4
    assert ForestConfig(max_features="sqrt").features_per_split(9) == 3
    assert ForestConfig(max_features=20).features_per_split(12) == 12
    assert ForestConfig(max_features=None).features_per_split(12) == 12
    assert ForestConfig.from_mapping(config.to_dict()) == config


@pytest.mark.parametrize(
    "values",
    [
        {"n_trees": 0},
        {"lambda_poisson": 0.0},
        {"delta_warning": 0.001, "delta_drift": 0.01},
        {"weight_decay": 1.0},
        {"drift_detector": "hddm"},
        {"max_features": "half"},
        {"archive_capacity": -1},
    ],
)
def test_config_errors(values):
    with pytest.raises(ConfigurationError):
        ForestConfig(**values)


def test_config_unknown_key():
    with pytest.raises(ConfigurationError):
        ForestConfig.from_mapping({"trees": 5})


# Learning


def test_untrained_forest():
    forest = ForestModel(4, 2, _small())
    label, votes = arf_predict(forest, np.zeros(4))
    assert label == 0
    assert votes.tolist() == [5.0, 0.0]

    with pytest.raises(ModelError):
        forest.learn_one(np.zeros(4), 3)
    with pytest.raises(ConfigurationError):
        ForestModel(4, 1)


def test_deterministic():
    x, y = label_flip_stream(400, 400, seed=3)

    def run():
        forest = ForestModel(4, 2, _small())
        predictions = []
        for row, label in zip(x, y):
            predictions.append(arf_predict(forest, row)[0])
            arf_learn_one(forest, row, label)
        return predictions, forest.weights

    first, second = run(), run()
    assert first[0] == second[0]
    assert np.array_equal(first[1], second[1])


def test_recovers_from_label_flip():
    x, y = label_flip_stream(3000, 1500, seed=4)
    forest = ForestModel(4, 2, _small())
    correct = []
    for row, label in zip(x, y):
        correct.append(arf_predict(forest, row)[0] == label)
        arf_learn_one(forest, row, label)

    assert np.mean(correct[1200:1500]) >= 0.8
    assert forest.n_drifts >= 1
    assert len(forest.archive) <= forest.config.archive_capacity
    assert np.mean(correct[-300:]) >= 0.75


def test_detectors_off():
    x, y = label_flip_stream(600, 300, seed=5)
    forest = ForestModel(4, 2, _small(detectors=False, resample=False))
    for row, label in zip(x, y):
        summary = forest.learn_one(row, label)
        assert summary == {"warnings": 0, "drifts": 0}
    assert forest.n_drifts == 0
    assert forest.replacements == []


@pytest.mark.parametrize("detector", ["ddm", "kswin", "page_hinkley"])
def test_other_detectors(detector):
    x, y = label_flip_stream(800, 400, seed=6)
    forest = ForestModel(4, 2, _small(drift_detector=detector))
    for row, label in zip(x, y):
        forest.learn_one(row, label)
    assert forest.n_seen == 800


def test_force_warning():
    forest = ForestModel(4, 2, _small())
    assert forest.force_warning() == 5
    assert forest.n_background == 5
    assert forest.force_warning() == 0
    assert forest.n_warnings == 5
