# 2026/09/06
"""
read.py - Reading traces, datasets and encoding tables.

Defines 'parse_trace', which turns one CSV row into a TraceRecord, and the
readers 'read_trace', 'read_dataset', 'read_encoding' and 'read_jsonl'.

Malformed rows are never skipped: they raise TraceParseError with the row
index (1 for the first data row).

"""

import json
import math
from pathlib import Path

import pandas as pd

from uwids.errors import IntegrityError, PersistenceError, TraceParseError
from uwids.etl.common import (
    DATASET_HEADER,
    ENCODING_FORMAT,
    ENCODING_VERSION,
    FEATURE_COLUMNS,
    LABEL_COLUMN,
    TRACE_FLOAT_FIELDS,
    TRACE_HEADER,
)
from uwids.model import PacketStatus, TraceLayer, TraceRecord

STATUS_VALUES = {s.value for s in PacketStatus}
LAYER_VALUES = {layer.value for layer in TraceLayer}


def parse_trace(row: str, row_index: int | None = None) -> TraceRecord:
    """Parses one trace CSV row (with or without line ending)."""
    cells = row.rstrip("\r\n").split(",")
    if len(cells) != len(TRACE_HEADER):
        raise TraceParseError(
            f"expected {len(TRACE_HEADER)} columns, found {len(cells)}", row_index
        )

    values = dict(zip(TRACE_HEADER, (c.strip() for c in cells)))
    if values["status"] not in STATUS_VALUES:
        raise TraceParseError(f"unknown packet status '{values['status']}'", row_index)
    if values["layer"] not in LAYER_VALUES:
        raise TraceParseError(f"unknown trace layer '{values['layer']}'", row_index)

    fields = {"status": values["status"], "layer": values["layer"]}
    for name in TRACE_HEADER:
        if name in fields:
            continue
        try:
            if name in TRACE_FLOAT_FIELDS:
                number = float(values[name])
                if not math.isfinite(number):
                    raise ValueError
            else:
                number = int(values[name])
        except ValueError:
            raise TraceParseError(
                f"column '{name}' has unparseable value '{values[name]}'", row_index
            ) from None
        fields[name] = number

    try:
        return TraceRecord(**fields)
    except ValueError as exc:
        raise TraceParseError(str(exc), row_index) from exc


def read_trace(path: str | Path) -> list[TraceRecord]:
    """Reads a trace CSV file, header included."""
    with open(path, encoding="utf-8", newline="") as f:
        header = f.readline().rstrip("\r\n")
        if header.split(",") != TRACE_HEADER:
            raise TraceParseError(f"'{path}' does not start with the trace header", 0)
        return [
            parse_trace(line, i) for i, line in enumerate(f, start=1) if line.strip()
        ]


def read_dataset(path: str | Path, *, require_label: bool = True) -> pd.DataFrame:
    """Reads an encoded dataset CSV into a DataFrame.

    Feature columns must all be present, in dataset order. The label column
    may be missing only if `require_label` is False.

    """
    frame = pd.read_csv(path)
    columns = list(frame.columns)
    features = list(FEATURE_COLUMNS)
    if columns[: len(features)] != features:
        raise IntegrityError(f"'{path}' does not have the dataset feature columns.")
    if LABEL_COLUMN not in columns:
        if require_label:
            raise IntegrityError(f"'{path}' has no '{LABEL_COLUMN}' column.")
    elif columns != DATASET_HEADER:
        raise IntegrityError(f"'{path}' has unexpected columns after the features.")
    return frame


def read_encoding(path: str | Path) -> dict[str, dict[str, int]]:
    """Reads an encoding table written by 'write_encoding'."""
    with open(path, encoding="utf-8") as f:
        try:
            payload = json.load(f)
        except json.JSONDecodeError as exc:
            raise PersistenceError(f"'{path}' is not valid JSON: {exc}") from exc
    if payload.get("format") != ENCODING_FORMAT:
        raise PersistenceError(f"'{path}' is not an encoding table.")
    if payload.get("version") != ENCODING_VERSION:
        raise PersistenceError(
            f"Unsupported encoding table version '{payload.get('version')}'."
        )
    return {
        column: {str(k): int(v) for k, v in mapping.items()}
        for column, mapping in payload["columns"].items()
    }


def read_jsonl(path: str | Path) -> list[dict]:
    """Reads a JSON-lines file, skipping blank lines."""
    rows = []
    with open(path, encoding="utf-8") as f:
        for number, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                rows.append(json.loads(line))
            except json.JSONDecodeError as exc:
                raise PersistenceError(f"'{path}' line {number}: {exc}") from exc
    return rows
