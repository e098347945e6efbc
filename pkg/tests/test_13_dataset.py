# 2026/09/24
"""
test_13_dataset.py - Tests for feature derivation and datasets
"""

import numpy as np
import pytest

from uwids.dataset import Dataset, EncodingTable, assemble_dataset, encoding_path_for
from uwids.errors import IntegrityError
from uwids.etl.common import DATASET_HEADER, FEATURE_COLUMNS, LABEL_COLUMN, ScenarioTrace
from uwids.features import FeatureDeriver, derive_features, label_record
from uwids.model import AttackKind, TraceRecord


@pytest.fixture
def stream():
    return [
        TraceRecord("s", 0.1, 3, 2, "RTR", 0),
        TraceRecord("s", 0.1, 3, 2, "MAC", 0, et=2.0),
        TraceRecord("r", 0.2, 3, 2, "MAC", 0, er=0.75),
        TraceRecord("s", 0.3, 2, 0, "RTR", 0),
        TraceRecord("s", 0.3, 2, 0, "MAC", 0, et=2.0),
        TraceRecord("d", 0.4, 2, 0, "RTR", 1, flag=2),
    ]


def _traces(stream):
    return [
        ScenarioTrace(AttackKind.NONE, frozenset(), stream),
        ScenarioTrace(AttackKind.BLACKHOLE, frozenset({2}), stream),
        ScenarioTrace(AttackKind.GRAYHOLE, frozenset({2}), stream),
        ScenarioTrace(AttackKind.FLOODING, frozenset({3, 4, 5}), stream),
    ]


# Features


def test_running_counts(stream):
    vectors = derive_features(stream)
    assert [v.cumulative_count for v in vectors] == [1, 1, 2, 2, 3, 3]
    assert [v.sender_rtr for v in vectors] == [1, 1, 1, 1, 1, 2]
    assert [v.sender_mac for v in vectors] == [0, 1, 2, 0, 1, 1]

    # Ratios of the other layer are carried forward
    assert vectors[0].mac_ratio == 0.0
    assert vectors[2].rtr_ratio == 1.0
    assert vectors[4].mac_ratio == pytest.approx(1 / 3)
    assert vectors[5].rtr_ratio == pytest.approx(2 / 3)
    assert vectors[5].trace_type_cat == "RTR"
    assert vectors[5].packet_status_cat == "d"


def test_chunked_derivation(stream):
    deriver = FeatureDeriver()
    chunked = derive_features(stream[:2], deriver=deriver)
    chunked += derive_features(stream[2:], deriver=deriver)
    assert chunked == derive_features(stream)


def test_labels(stream):
    to_sink = stream[3]
    assert label_record(to_sink, {2}, AttackKind.BLACKHOLE) == 0
    assert label_record(stream[0], {2}, AttackKind.BLACKHOLE) == 1
    assert label_record(to_sink, {2}, AttackKind.GRAYHOLE) == 2
    assert label_record(stream[0], {3}, AttackKind.FLOODING) == 3
    assert label_record(stream[0], {3}, "none") == 0


# Encoding


def test_encoding_table():
    table = EncodingTable()
    assert table.encode("Packet_Status_Cat", "d") == 2
    assert table.encode("Flag_Cat", 1) == 1
    assert table.decode("Trace_Type_Cat", 1) == "MAC"
    assert table.is_known("Flag_Cat", 2)
    assert not table.is_known("Flag_Cat", 7)

    # New categories take the next free code
    assert table.encode("Flag_Cat", 9) == 3
    with pytest.raises(IntegrityError):
        table.encode("Dst_Port_Cat", 42, extend=False)
    with pytest.raises(IntegrityError):
        table.decode("Flag_Cat", 10)

    assert EncodingTable(table.to_dict()) == table
    with pytest.raises(IntegrityError):
        EncodingTable({"Flag_Cat": {"0": 0, "1": 0}})


# Datasets


def test_assemble_d1(stream):
    dataset = assemble_dataset(_traces(stream))
    assert dataset.mode == "d1"
    assert len(dataset) == 4 * len(stream)
    assert list(dataset.frame.columns) == DATASET_HEADER
    assert set(dataset.labels()) == {0, 1, 2, 3}
    assert dataset.features().shape == (24, len(FEATURE_COLUMNS))

    # Counts restart with every scenario
    counts = dataset.frame["Cumulative_Count"].to_numpy()
    assert np.array_equal(counts[:6], counts[6:12])


def test_assemble_d2(stream):
    dataset = assemble_dataset(_traces(stream), "d2")
    assert dataset.mode == "d2"
    assert set(dataset.labels()) == {0, 1}
    assert dataset.normal().labels().sum() == 0

    with pytest.raises(ValueError):
        assemble_dataset(_traces(stream), "d3")


def test_split(stream):
    dataset = assemble_dataset(_traces(stream))
    train, test = dataset.split(0.75)
    assert (len(train), len(test)) == (18, 6)
    assert test.frame["Time"].tolist() == dataset.frame["Time"].tolist()[18:]

    with pytest.raises(ValueError):
        dataset.split(1.0)


def test_dataset_file(tmp_path, stream):
    dataset = assemble_dataset(_traces(stream))
    path = dataset.write(tmp_path / "dataset.csv")
    assert encoding_path_for(path).exists()

    read_back = Dataset.read(path)
    assert read_back.mode == "d1"
    assert read_back.encoding == dataset.encoding
    assert np.allclose(read_back.features(), dataset.features())
    assert np.array_equal(read_back.labels(), dataset.labels())

    with pytest.raises(FileExistsError):
        dataset.write(path)


def test_dataset_without_labels(tmp_path, stream):
    dataset = assemble_dataset(_traces(stream))
    path = tmp_path / "unlabelled.csv"
    dataset.frame.drop(columns=[LABEL_COLUMN]).to_csv(path, index=False)

    with pytest.raises(IntegrityError):
        Dataset.read(path)
    unlabelled = Dataset.read(path, require_label=False)
    assert unlabelled.mode is None
    assert not unlabelled.has_labels
    with pytest.raises(IntegrityError):
        unlabelled.labels()


def test_dataset_bad_labels(stream):
    frame = assemble_dataset(_traces(stream)).frame
    frame.loc[0, LABEL_COLUMN] = 5
    with pytest.raises(IntegrityError):
        Dataset(frame)
