# 2026/09/25
"""
test_21_anomaly.py - Tests for the one-class anomaly detectors
"""

import numpy as np
import pytest
from sklearn.preprocessing import MinMaxScaler
from sklearn.svm import OneClassSVM

from uwids.anomaly import (
    OcsvmEnsemble,
    OcsvmModel,
    ensemble_vote,
    iforest_verdict,
    load_model,
    ocsvm_decision,
    rbf_gram,
    rbf_kernel,
    save_model,
    train_bagged_ensemble,
    train_iforest,
    train_ocsvm,
)
from uwids.anomaly.ocsvm import dual_objective, solve_dual
from uwids.errors import (
    ConfigurationError,
    DimensionError,
    PersistenceError,
    TrainingError,
)

FAR = np.array([[25.0, -25.0, 25.0]])


@pytest.fixture(scope="module")
def normal_data():
    return np.random.default_rng(11).normal(size=(300, 3))


@pytest.fixture(scope="module")
def model(normal_data):
    return train_ocsvm(normal_data, nu=0.1, gamma=0.3)


# Kernel


def test_rbf_kernel():
    assert rbf_kernel([1.0, 2.0], [1.0, 2.0], 0.3) == 1.0
    assert rbf_kernel([0.0, 0.0], [1.0, 1.0], 0.3) == pytest.approx(np.exp(-0.6))

    a = np.random.default_rng(0).normal(size=(4, 2))
    gram = rbf_gram(a, a[:3], 0.5)
    assert gram.shape == (4, 3)
    assert gram[3, 1] == pytest.approx(rbf_kernel(a[3], a[1], 0.5))

    with pytest.raises(ConfigurationError):
        rbf_kernel([0.0], [1.0], 0.0)
    with pytest.raises(DimensionError):
        rbf_gram(a, np.zeros((2, 3)), 0.5)


# OCSVM


def test_dual_feasible(normal_data):
    nu, n = 0.1, 120
    scaled = MinMaxScaler().fit_transform(normal_data[:n])
    gram = rbf_gram(scaled, scaled, 0.3)
    alphas = solve_dual(gram, nu)

    assert alphas.sum() == pytest.approx(1.0, abs=1e-9)
    assert alphas.min() >= 0.0
    assert alphas.max() <= 1.0 / (nu * n) + 1e-12

    start = np.zeros(n)
    start[: int(nu * n)] = 1.0 / (nu * n)
    assert dual_objective(gram, alphas) <= dual_objective(gram, start)


def test_nu_property(normal_data, model):
    outliers = np.mean(model.predict(normal_data) == -1)
    assert outliers <= 0.1 + 0.05
    # At least nu * n vectors carry mass
    assert len(model.alphas) >= 30
    assert model.predict(FAR)[0] == -1


def test_matches_reference_solver(normal_data, model):
    scaler = MinMaxScaler().fit(normal_data)
    reference = OneClassSVM(kernel="rbf", nu=0.1, gamma=0.3).fit(scaler.transform(normal_data))
    queries = np.random.default_rng(12).normal(scale=1.5, size=(500, 3))
    ours = model.predict(queries)
    theirs = reference.predict(scaler.transform(queries))
    assert np.mean(ours == theirs) >= 0.9


def test_ocsvm_decision(model):
    score, verdict = ocsvm_decision(model, FAR[0])
    assert score < 0
    assert verdict == -1
    score, verdict = ocsvm_decision(model, np.zeros(3))
    assert score >= 0
    assert verdict == 1

    with pytest.raises(DimensionError):
        model.decision_function(np.zeros((2, 4)))


def test_ocsvm_bad_input(normal_data):
    with pytest.raises(TrainingError):
        train_ocsvm(normal_data[:1])
    with pytest.raises(TrainingError):
        train_ocsvm(np.ones((10, 3)))
    with pytest.raises(ConfigurationError):
        train_ocsvm(normal_data, nu=0.0)
    with pytest.raises(ConfigurationError):
        train_ocsvm(normal_data, gamma=-1.0)


# Ensemble


def test_ensemble(normal_data):
    ensemble = train_bagged_ensemble(normal_data[:150], k=5, nu=0.1, gamma=0.3, seed=4)
    assert len(ensemble) == 5

    queries = np.vstack([np.zeros((1, 3)), FAR])
    votes = ensemble.votes(queries)
    assert votes.shape == (5, 2)
    assert list(ensemble.predict(queries)) == [1, -1]
    assert ensemble_vote(ensemble, FAR[0]) == -1

    again = train_bagged_ensemble(normal_data[:150], k=5, nu=0.1, gamma=0.3, seed=4)
    assert np.array_equal(again.votes(normal_data), ensemble.votes(normal_data))


def test_ensemble_size():
    with pytest.raises(ConfigurationError):
        train_bagged_ensemble(np.zeros((4, 2)), k=4)
    with pytest.raises(ConfigurationError):
        OcsvmEnsemble([])


# Isolation forest


def test_iforest(normal_data):
    forest = train_iforest(normal_data, trees=50, contamination=0.05, seed=1)
    flagged = np.mean(forest.predict(normal_data) == -1)
    assert flagged == pytest.approx(0.05, abs=0.02)
    assert iforest_verdict(forest, FAR[0]) == -1
    assert forest.score_samples(FAR)[0] < forest.score_samples(np.zeros((1, 3)))[0]

    with pytest.raises(ConfigurationError):
        train_iforest(normal_data, contamination=0.9)
    with pytest.raises(TrainingError):
        train_iforest(normal_data[:1])


# Persistence


def test_persistence(tmp_path, normal_data, model):
    path = save_model(tmp_path / "gate.json", model)
    loaded = load_model(path)
    assert isinstance(loaded, OcsvmModel)
    assert np.allclose(loaded.decision_function(normal_data), model.decision_function(normal_data))

    ensemble = train_bagged_ensemble(normal_data[:60], k=3, nu=0.2, seed=1)
    loaded = load_model(save_model(tmp_path / "ensemble.json", ensemble))
    assert isinstance(loaded, OcsvmEnsemble)
    assert np.array_equal(loaded.predict(normal_data), ensemble.predict(normal_data))

    with pytest.raises(FileExistsError):
        save_model(path, model)
    with pytest.raises(PersistenceError):
        save_model(tmp_path / "other.json", object())

    path.write_text('{"format": "uwids-ocsvm", "version": 7}', encoding="utf-8")
    with pytest.raises(PersistenceError):
        load_model(path)
