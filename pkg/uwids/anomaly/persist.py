# 2026/09/08
"""
persist.py - Saving and loading anomaly models.

Models are stored as JSON documents tagged with a format name and a
version number; loading rejects anything else.

"""

import json
from pathlib import Path

from uwids.anomaly.ensemble import OcsvmEnsemble
from uwids.anomaly.ocsvm import OcsvmModel
from uwids.errors import PersistenceError
from uwids.etl import process_path

FORMATS = {
    "uwids-ocsvm": OcsvmModel,
    "uwids-ocsvm-ensemble": OcsvmEnsemble,
}
VERSION = 1


def save_model(
    path: str | Path, model: OcsvmModel | OcsvmEnsemble, *, overwrite: bool = False
) -> Path:
    kind = next((k for k, cls in FORMATS.items() if isinstance(model, cls)), None)
    if kind is None:
        raise PersistenceError(f"Cannot save objects of type {type(model).__name__}.")
    target = process_path(path, overwrite)
    with open(target, "w", encoding="utf-8", newline="\n") as f:
        json.dump({"format": kind, "version": VERSION, **model.to_dict()}, f)
    return target


def load_model(path: str | Path) -> OcsvmModel | OcsvmEnsemble:
    with open(path, encoding="utf-8") as f:
        try:
            payload = json.load(f)
        except json.JSONDecodeError as exc:
            raise PersistenceError(f"'{path}' is not valid JSON: {exc}") from exc
    kind = payload.get("format")
    if kind not in FORMATS:
        raise PersistenceError(f"Unknown model format '{kind}'.")
    if payload.get("version") != VERSION:
        raise PersistenceError(f"Unsupported {kind} version '{payload.get('version')}'.")
    return FORMATS[kind].from_dict(payload)
