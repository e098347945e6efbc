# 2026/09/25
"""
test_22_drift.py - Tests for the drift detectors and synthetic streams
"""

import numpy as np
import pytest

from uwids.drift import (
    AdwinState,
    DdmState,
    DriftKind,
    KdqSlidingDetector,
    KswinState,
    PageHinkleyState,
    SignalKind,
    adwin_update,
    ddm_update,
    kdqtree_build,
    kdqtree_detect,
    kl_divergence,
    kswin_update,
    label_flip_stream,
    make_detector,
    page_hinkley_update,
    synth_drift_stream,
)
from uwids.drift.kswin import kswin_threshold
from uwids.errors import ConfigurationError, DimensionError, InputRangeError


def _signals(detector, values):
    return [detector.update(v) for v in values]


def _first(signals, kind):
    return next((s.position for s in signals if s.kind == kind), None)


# ADWIN


def test_adwin_stationary():
    adwin = AdwinState()
    signals = _signals(adwin, [0.0] * 2000)
    assert all(s.kind == SignalKind.STABLE for s in signals)
    assert adwin.width == 2000
    assert signals[-1].position == 1999


def test_adwin_step():
    adwin = AdwinState(delta=0.001)
    signals = [adwin_update(adwin, v) for v in [0.0] * 1000 + [1.0] * 200]
    drift = _first(signals, SignalKind.DRIFT)
    assert drift is not None
    assert 1000 <= drift < 1100
    # The old concept has been cut away
    assert adwin.width < 250
    assert adwin.mean > 0.8


def test_adwin_compression():
    adwin = AdwinState(max_buckets=5)
    _signals(adwin, [0.0, 1.0] * 500)
    assert adwin.width == 1000
    assert adwin.total == 500.0
    assert adwin.bucket_count < 60


def test_adwin_bad_input():
    adwin = AdwinState()
    with pytest.raises(InputRangeError):
        adwin.update(1.5)
    with pytest.raises(ConfigurationError):
        AdwinState(delta=0.0)
    with pytest.raises(ConfigurationError):
        AdwinState(delta=0.01, delta_warning=0.001)

    _signals(adwin, [1.0] * 50)
    adwin.reset()
    assert adwin.width == 0
    assert adwin.n_seen == 50


# DDM


def test_ddm_warning_then_drift():
    ddm = DdmState()
    baseline = [int(i % 10 == 9) for i in range(100)]
    _signals(ddm, baseline)
    signals = [ddm_update(ddm, 1) for _ in range(20)]

    warning = _first(signals, SignalKind.WARNING)
    drift = _first(signals, SignalKind.DRIFT)
    assert warning is not None and drift is not None
    assert warning < drift
    # The state starts over after a drift
    assert ddm.n < 20


def test_ddm_error_free_prefix():
    ddm = DdmState()
    assert all(s.kind == SignalKind.STABLE for s in _signals(ddm, [0] * 40))
    # p_min + s_min is zero, so the first error crosses the drift level
    assert ddm_update(ddm, 1).kind == SignalKind.DRIFT
    assert ddm.n == 0


def test_ddm_bad_input():
    with pytest.raises(InputRangeError):
        DdmState().update(2)
    with pytest.raises(ConfigurationError):
        DdmState(warning_level=3.0, drift_level=2.0)


# Page-Hinkley


def test_page_hinkley():
    ph = PageHinkleyState(threshold=50.0)
    signals = _signals(ph, [0.0] * 200)
    assert all(s.kind == SignalKind.STABLE for s in signals)

    signals = [page_hinkley_update(ph, 10.0) for _ in range(30)]
    drift = _first(signals, SignalKind.DRIFT)
    assert drift is not None and drift < 220
    assert signals[drift - 200].detail["statistic"] >= 50.0

    with pytest.raises(ConfigurationError):
        PageHinkleyState(threshold=0.0)


# KSWIN


def test_kswin():
    assert kswin_threshold(0.005, 30, 30) == pytest.approx(0.6320, abs=1e-3)

    kswin = KswinState(alpha=0.005, window_size=100, stat_size=30)
    signals = [kswin_update(kswin, v) for v in [0.0] * 100 + [1.0] * 40]
    drifts = [s.position for s in signals if s.is_drift]
    # 19 of the 30 recent values must differ from the sample
    assert drifts[0] == 118
    assert signals[118].detail["statistic"] == pytest.approx(19 / 30)
    assert len(kswin.window) <= 100

    with pytest.raises(ConfigurationError):
        KswinState(window_size=100, stat_size=60)


def test_make_detector():
    assert isinstance(make_detector("adwin"), AdwinState)
    assert isinstance(make_detector("page-hinkley"), PageHinkleyState)
    assert make_detector("kswin", alpha=0.01).alpha == 0.01
    assert make_detector("DDM").name == "ddm"
    with pytest.raises(ConfigurationError):
        make_detector("hddm")


# Synthetic streams


def test_synth_abrupt():
    stream = synth_drift_stream("abrupt", 1000, seed=1)
    assert stream.kind == DriftKind.ABRUPT
    assert stream.change_points == [500]
    assert set(np.unique(stream.values)) <= {0.0, 1.0}
    assert stream.rates[499] == 0.2 and stream.rates[500] == 0.8
    assert np.array_equal(stream.values, synth_drift_stream("abrupt", 1000, seed=1).values)
    assert stream.to_dict() == {"kind": "abrupt", "length": 1000, "change_points": [500]}


def test_synth_kinds():
    incremental = synth_drift_stream(DriftKind.INCREMENTAL, 4000, change_at=1000, width=500)
    assert incremental.rates[999] == 0.2
    assert 0.2 < incremental.rates[1200] < 0.8
    assert incremental.rates[1499] == pytest.approx(0.8)

    gradual = synth_drift_stream(DriftKind.GRADUAL, 4000, change_at=1000, width=500)
    assert set(np.unique(gradual.rates)) == {0.2, 0.8}
    assert np.all(gradual.rates[:1000] == 0.2)
    assert np.all(gradual.rates[1499:] == 0.8)

    recurring = synth_drift_stream(DriftKind.RECURRING, 3500, period=1000)
    assert recurring.change_points == [1000, 2000, 3000]
    assert recurring.rates[1500] == 0.8 and recurring.rates[2500] == 0.2

    with pytest.raises(ConfigurationError):
        synth_drift_stream("abrupt", 0)
    with pytest.raises(ValueError):
        synth_drift_stream("sudden", 100)


def test_label_flip_stream():
    x, y = label_flip_stream(1000, 600, seed=2)
    assert x.shape == (1000, 4)
    assert np.array_equal(y[:600], (x[:600, 0] >= 0.5).astype(int))
    assert np.array_equal(y[600:], (x[600:, 0] < 0.5).astype(int))


# kdq-tree


@pytest.fixture(scope="module")
def reference():
    return np.random.default_rng(21).normal(size=(500, 2))


def test_kl_divergence():
    p = np.array([0.25, 0.25, 0.5])
    assert kl_divergence(p, p) == 0.0
    expected = 0.25 * np.log(0.5) + 0.5 * np.log(2)
    assert kl_divergence(p, [0.5, 0.25, 0.25]) == pytest.approx(expected)
    with pytest.raises(DimensionError):
        kl_divergence(p, [0.5, 0.5])


def test_kdqtree_build(reference):
    tree = kdqtree_build(reference, count_bound=50)
    assert tree.n_leaves > 10
    assert tree.reference_counts.sum() == 500
    assert tree.reference_counts.max() <= 50
    assert np.array_equal(tree.counts(reference), tree.reference_counts)

    lower, upper = tree.leaf_bounds(int(tree.leaves_of([[100.0, 100.0]])[0]))
    assert upper == [None, None]
    assert all(b is not None for b in lower)

    with pytest.raises(DimensionError):
        tree.leaves_of(np.zeros((3, 3)))
    with pytest.raises(ConfigurationError):
        kdqtree_build(np.zeros((0, 2)))


def test_kdqtree_detect(reference):
    tree = kdqtree_build(reference)
    threshold = tree.threshold(0.05, 200, seed=1)
    assert threshold > 0.0
    assert tree.threshold(0.05, 200, seed=1) == threshold

    same = kdqtree_detect(tree, reference, 0.05, 200, seed=1)
    assert same.kind == SignalKind.STABLE
    assert same.detail["kl"] == 0.0

    shifted = reference.copy()
    shifted[:200] = [4.0, 4.0]
    signal = kdqtree_detect(tree, shifted, 0.05, 200, position=77, seed=1)
    assert signal.is_drift
    assert signal.position == 77
    assert signal.detail["kl"] > signal.detail["threshold"]
    # The change is located in the corner cell holding the new points
    assert signal.detail["upper"] == [None, None]
    assert signal.detail["llr"] > 0

    with pytest.raises(DimensionError):
        kdqtree_detect(tree, reference[:100])


def test_kdq_sliding(reference):
    rng = np.random.default_rng(22)
    stream = np.vstack([reference, rng.normal(loc=3.0, size=(500, 2))])
    detector = KdqSlidingDetector(200, 0.01, 200, stride=50, seed=3)
    assert detector.name == "kdqtree"

    signals = _signals(detector, stream)
    drifts = [s.position for s in signals if s.is_drift]
    assert any(500 <= p < 700 for p in drifts)
    assert signals[199].kind == SignalKind.STABLE

    with pytest.raises(ConfigurationError):
        KdqSlidingDetector(1)
