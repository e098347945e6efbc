# 2026/10/01
"""
test_91_acceptance.py - Monte-Carlo calibration and end-to-end runs.

Every test here is marked 'slow'. Run them with UWIDS_SLOW=1.

"""

import numpy as np
import pytest

from uwids.anomaly import train_ocsvm
from uwids.dataset import assemble_dataset
from uwids.drift import AdwinState, kdqtree_build, kdqtree_detect, synth_drift_stream
from uwids.experiments import drift_resilience, generate_scenarios
from uwids.ips import SCENARIOS, run_demo
from uwids.model import SimConfig
from uwids.pipeline import PipelineConfig, build_state, normal_rows, run_pipeline

pytestmark = pytest.mark.slow


@pytest.fixture(scope="module")
def generated():
    """The 16-node dataset and its train-eval run."""
    dataset = assemble_dataset(generate_scenarios(SimConfig(rng_seed=7)))
    return dataset, run_pipeline(dataset, PipelineConfig())


# Drift detectors


def test_adwin_false_alarms():
    alarms = 0
    for seed in range(100):
        values = np.random.default_rng(seed).random(10_000) < 0.5
        adwin = AdwinState(delta=0.001)
        alarms += any(adwin.update(float(v)).is_drift for v in values)
    assert alarms <= 5


def test_adwin_detection_delay():
    detected = 0
    for seed in range(100):
        stream = synth_drift_stream("abrupt", 4000, seed, change_at=2000)
        adwin = AdwinState(delta=0.001)
        drifts = [t for t, v in enumerate(stream.values) if adwin.update(float(v)).is_drift]
        detected += any(2000 <= t < 2300 for t in drifts)
    assert detected >= 95


def test_kdqtree_calibration():
    rng = np.random.default_rng(90)
    alarms = 0
    for trial in range(200):
        tree = kdqtree_build(rng.normal(size=(500, 2)))
        alarms += kdqtree_detect(tree, rng.normal(size=(500, 2)), seed=trial).is_drift
    assert alarms <= 20


def test_kdqtree_power_and_location():
    rng = np.random.default_rng(91)
    detected = located = 0
    for trial in range(100):
        tree = kdqtree_build(rng.normal(size=(500, 2)))
        signal = kdqtree_detect(tree, rng.normal(loc=3.0, size=(500, 2)), seed=trial)
        if signal.is_drift:
            detected += 1
            upper = signal.detail["upper"]
            located += all(u is None or u > 1.5 for u in upper)
    assert detected >= 95
    assert located >= 80


def test_drift_resilience():
    frame = drift_resilience(seeds=range(20))
    assert (frame["adaptive"] >= frame["frozen"]).mean() >= 0.9


# Detection


def test_nu_property(generated):
    dataset, _ = generated
    train, _ = dataset.split(0.7)
    normal = normal_rows(train, 2000)
    gate = train_ocsvm(normal, 0.01, 0.3)
    assert np.mean(gate.predict(normal) == -1) <= 0.02


def test_hybrid_pipeline(generated):
    _, run = generated
    hybrid = run.metrics["hybrid"]
    assert hybrid.tpr >= 0.99
    assert hybrid.fpr <= 0.05
    assert hybrid.tpr >= run.metrics["arf"].tpr


def test_out_of_distribution(generated):
    dataset, _ = generated
    train, _ = dataset.split(0.7)
    state = build_state(train, PipelineConfig())

    ood = generate_scenarios(SimConfig(rng_seed=8), ood=True)
    unseen = assemble_dataset(ood, encoding=dataset.encoding)
    run = run_pipeline(unseen, mode="detect", state=state)
    assert run.metrics["hybrid"].tpr >= 0.99
    assert run.metrics["hybrid"].fpr <= 0.05


# Key reset


def test_ips_trials():
    results = run_demo(seed=5, trials=10)
    assert len(results) == 10 * len(SCENARIOS)
    assert all(r.passed for r in results)
