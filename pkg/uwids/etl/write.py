# 2026/09/06
"""
write.py - Writing traces, datasets and encoding tables.

Defines 'serialize', which turns a TraceRecord into one CSV row, and the
writers 'write_trace', 'write_dataset' and 'write_encoding'. Every writer
goes through 'process_path', which expands name placeholders and refuses to
overwrite unless asked to.

"""

import json
from datetime import datetime
from pathlib import Path
from typing import Any, Iterable

import pandas as pd

from uwids.etl.common import (
    DATASET_HEADER,
    ENCODING_FORMAT,
    ENCODING_VERSION,
    FLOAT_DECIMALS,
    FLOAT_COLUMNS,
    TRACE_FLOAT_FIELDS,
    TRACE_HEADER,
)
from uwids.model import TraceRecord


def serialize(record: TraceRecord) -> str:
    """Turns `record` into one trace CSV row, without line ending."""
    values = record.to_dict()
    cells = []
    for name in TRACE_HEADER:
        value = values[name]
        if name in TRACE_FLOAT_FIELDS:
            cells.append(f"{value:.{FLOAT_DECIMALS}f}")
        else:
            cells.append(str(value))
    return ",".join(cells)


def write_trace(
    path: str | Path,
    records: Iterable[TraceRecord],
    *,
    overwrite: bool = False,
    **placeholders: Any,
) -> Path:
    """Writes trace records to a CSV file with LF line endings.

    See 'process_path' for the placeholders accepted in `path`.

    Returns the path written.

    """
    target = process_path(path, overwrite, **placeholders)
    with open(target, "w", encoding="utf-8", newline="\n") as f:
        f.write(",".join(TRACE_HEADER) + "\n")
        for record in records:
            f.write(serialize(record) + "\n")
    return target


def write_dataset(
    path: str | Path,
    frame: pd.DataFrame,
    *,
    overwrite: bool = False,
    **placeholders: Any,
) -> Path:
    """Writes an encoded dataset table in the dataset column order."""
    target = process_path(path, overwrite, **placeholders)
    columns = [c for c in DATASET_HEADER if c in frame.columns]
    out = frame[columns].copy()
    for column in FLOAT_COLUMNS:
        if column in out.columns:
            out[column] = out[column].map(lambda v: f"{v:.{FLOAT_DECIMALS}f}")
    out.to_csv(target, index=False, lineterminator="\n")
    return target


def write_encoding(
    path: str | Path,
    columns: dict[str, dict[str, int]],
    *,
    overwrite: bool = False,
    **placeholders: Any,
) -> Path:
    """Writes an encoding table (column -> category -> code) as JSON."""
    target = process_path(path, overwrite, **placeholders)
    payload = {
        "format": ENCODING_FORMAT,
        "version": ENCODING_VERSION,
        "columns": {
            column: dict(sorted(mapping.items(), key=lambda kv: kv[1]))
            for column, mapping in columns.items()
        },
    }
    with open(target, "w", encoding="utf-8", newline="\n") as f:
        json.dump(payload, f, indent=2)
        f.write("\n")
    return target


def write_jsonl(
    path: str | Path,
    rows: Iterable[dict[str, Any]],
    *,
    overwrite: bool = False,
    **placeholders: Any,
) -> Path:
    """Writes one JSON object per line."""
    target = process_path(path, overwrite, **placeholders)
    with open(target, "w", encoding="utf-8", newline="\n") as f:
        for row in rows:
            f.write(json.dumps(row, sort_keys=True) + "\n")
    return target


def write_json(path: str | Path, payload: Any, *, overwrite: bool = False) -> Path:
    target = process_path(path, overwrite)
    with open(target, "w", encoding="utf-8", newline="\n") as f:
        json.dump(payload, f, indent=2, sort_keys=True)
        f.write("\n")
    return target


def process_path(path: str | Path, overwrite: bool = False, **placeholders: Any) -> Path:
    """Expands name placeholders in `path` and checks the target.

    The file name may include:
    - `{now}`: Current date and time in 'YYYYMMDDHHMMSS' format.
    - Any keyword passed in `placeholders`, e.g. `{scenario}` or `{seed}`.

    Creates missing parent directories. Raises FileExistsError if the
    target exists and `overwrite` is False.

    """
    path = Path(path)
    name = path.name
    if "{" in name:
        name = name.format(now=datetime.now().strftime("%Y%m%d%H%M%S"), **placeholders)
    target = path.parent / name

    if target.exists() and not overwrite:
        raise FileExistsError(
            f"Target file '{target}' already exists. Use 'overwrite=True' to overwrite."
        )
    target.parent.mkdir(parents=True, exist_ok=True)
    return target
