from uwids.drift.adwin import AdwinState, adwin_update
from uwids.drift.base import DriftDetector, DriftSignal, SignalKind
from uwids.drift.ddm import DdmState, ddm_update
from uwids.drift.kdqtree import (
    KdqSlidingDetector,
    KdqTree,
    kdqtree_build,
    kdqtree_detect,
    kl_divergence,
)
from uwids.drift.kswin import KswinState, kswin_update
from uwids.drift.page_hinkley import PageHinkleyState, page_hinkley_update
from uwids.drift.synth import DriftKind, SynthStream, label_flip_stream, synth_drift_stream
from uwids.errors import ConfigurationError

DETECTORS = {
    "adwin": AdwinState,
    "ddm": DdmState,
    "kswin": KswinState,
    "page_hinkley": PageHinkleyState,
}


def make_detector(name: str, **params) -> DriftDetector:
    """Builds one of the univariate detectors by name."""
    try:
        cls = DETECTORS[name.replace("-", "_").lower()]
    except KeyError:
        raise ConfigurationError(
            f"Unknown drift detector '{name}', expected one of {sorted(DETECTORS)}."
        ) from None
    return cls(**params)
