# 2026/09/24
"""
test_12_etl.py - Tests for reading and writing traces, tables and logs
"""

import json

import pytest

from uwids import etl
from uwids.errors import IntegrityError, PersistenceError, TraceParseError
from uwids.etl.common import TRACE_HEADER
from uwids.model import PacketStatus, TraceLayer, TraceRecord


@pytest.fixture
def records():
    return [
        TraceRecord("s", 0.5, 3, 1, "MAC", 0, energy=9998.0, et=2.0),
        TraceRecord("r", 0.5123456, 1, 3, "MAC", 0, energy=9999.25, er=0.75),
        TraceRecord("d", 1.0, 1, 0, "RTR", 0, flag=2),
    ]


# Traces


def test_serialize_parse(records):
    row = etl.serialize(records[1])
    assert row == "r,0.512346,1,3,MAC,0,0,0,0,0,9999.250000,0.000000,0.750000"

    record = etl.parse_trace(row + "\n")
    assert record.status == PacketStatus.RECEIVE
    assert record.layer == TraceLayer.MAC
    assert record.time == pytest.approx(0.512346)
    assert record.er == 0.75


def test_parse_bad_rows():
    with pytest.raises(TraceParseError) as info:
        etl.parse_trace("s,0.5,3,1,MAC,0", row_index=7)
    assert info.value.row_index == 7
    assert "row 7" in str(info.value)

    with pytest.raises(TraceParseError):
        etl.parse_trace("x,0.5,3,1,MAC,0,0,0,0,0,1.0,0.0,0.0")
    with pytest.raises(TraceParseError):
        etl.parse_trace("s,nan,3,1,MAC,0,0,0,0,0,1.0,0.0,0.0")
    with pytest.raises(TraceParseError):
        etl.parse_trace("s,0.5,three,1,MAC,0,0,0,0,0,1.0,0.0,0.0")

    # Also a ValueError
    with pytest.raises(ValueError):
        etl.parse_trace("s,-0.5,3,1,MAC,0,0,0,0,0,1.0,0.0,0.0")


def test_trace_file(tmp_path, records):
    path = etl.write_trace(tmp_path / "trace_{scenario}.csv", records, scenario="none")
    assert path.name == "trace_none.csv"

    text = path.read_bytes().decode("utf-8")
    assert "\r" not in text
    assert text.splitlines()[0] == ",".join(TRACE_HEADER)

    read_back = etl.read_trace(path)
    assert len(read_back) == 3
    assert [r.status for r in read_back] == [r.status for r in records]
    assert read_back[2].flag == 2


def test_trace_file_bad_header(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("time,status\n0.5,s\n", encoding="utf-8")
    with pytest.raises(TraceParseError):
        etl.read_trace(path)


# Paths


def test_process_path(tmp_path):
    target = etl.process_path(tmp_path / "sub" / "run_{seed}.json", seed=4)
    assert target == tmp_path / "sub" / "run_4.json"
    assert target.parent.is_dir()

    target.write_text("{}", encoding="utf-8")
    with pytest.raises(FileExistsError):
        etl.process_path(tmp_path / "sub" / "run_{seed}.json", seed=4)
    assert etl.process_path(target, overwrite=True) == target

    stamped = etl.process_path(tmp_path / "log_{now}.txt")
    assert len(stamped.stem) == len("log_") + 14


# Encoding tables and logs


def test_encoding_file(tmp_path):
    columns = {"Flag_Cat": {"1": 1, "0": 0, "2": 2}}
    path = etl.write_encoding(tmp_path / "enc.json", columns)
    assert etl.read_encoding(path) == columns

    payload = json.loads(path.read_text(encoding="utf-8"))
    assert list(payload["columns"]["Flag_Cat"]) == ["0", "1", "2"]

    payload["version"] = 99
    path.write_text(json.dumps(payload), encoding="utf-8")
    with pytest.raises(PersistenceError):
        etl.read_encoding(path)


def test_jsonl(tmp_path):
    rows = [{"index": 1, "kind": "drift"}, {"index": 4, "kind": "warning"}]
    path = etl.write_jsonl(tmp_path / "events.jsonl", rows)
    assert etl.read_jsonl(path) == rows
    assert path.read_text(encoding="utf-8").splitlines()[0] == '{"index": 1, "kind": "drift"}'

    path.write_text('{"index": 1}\n\n{broken\n', encoding="utf-8")
    with pytest.raises(PersistenceError):
        etl.read_jsonl(path)


def test_read_dataset_columns(tmp_path):
    path = tmp_path / "wrong.csv"
    path.write_text("Time,Energy\n1.0,2.0\n", encoding="utf-8")
    with pytest.raises(IntegrityError):
        etl.read_dataset(path)
