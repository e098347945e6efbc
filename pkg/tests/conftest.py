# 2026/09/24
"""
conftest.py - Shared fixtures.

Tests marked 'slow' only run with UWIDS_SLOW=1 in the environment.

"""

import os

import numpy as np
import pandas as pd
import pytest

from uwids.dataset import Dataset
from uwids.etl.common import CATEGORICAL_COLUMNS, FEATURE_COLUMNS, LABEL_COLUMN
from uwids.model import SimConfig


def pytest_collection_modifyitems(config, items):
    if os.environ.get("UWIDS_SLOW") == "1":
        return
    skip = pytest.mark.skip(reason="slow; set UWIDS_SLOW=1 to run")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


@pytest.fixture
def small_config() -> SimConfig:
    """16 nodes, one minute of traffic."""
    return SimConfig(node_count=16, sim_duration=60.0, data_interval=0.5, rng_seed=3)


@pytest.fixture(scope="session")
def labelled_frame() -> pd.DataFrame:
    """600 encoded rows; every third one is an attack, shifted far from the
    normal cluster."""
    rng = np.random.default_rng(40)
    n = 600
    labels = np.array([0 if i % 3 else 1 + (i // 3) % 3 for i in range(n)])
    frame = pd.DataFrame(
        {
            column: 0 if column in CATEGORICAL_COLUMNS else rng.normal(size=n)
            for column in FEATURE_COLUMNS
        }
    )
    numeric = [c for c in FEATURE_COLUMNS if c not in CATEGORICAL_COLUMNS]
    frame.loc[labels != 0, numeric] += 6.0
    frame[LABEL_COLUMN] = labels
    return frame


@pytest.fixture
def labelled_dataset(labelled_frame) -> Dataset:
    return Dataset(labelled_frame.copy())
