# 2026/09/14
"""
persist.py - Forest checkpoints.

A checkpoint is a JSON document tagged 'uwids-forest' with a version number.
It keeps the configuration, the foreground trees with their statistics, the
vote weights and the random generator states. Background trees, detector
windows and the archive are not kept: a loaded forest predicts exactly like
the saved one and resumes learning with fresh detectors.

"""

import json
from pathlib import Path

from uwids.errors import PersistenceError
from uwids.etl import process_path
from uwids.learn.forest import ForestModel

FORMAT = "uwids-forest"
VERSION = 1


def save_forest(path: str | Path, forest: ForestModel, *, overwrite: bool = False) -> Path:
    target = process_path(path, overwrite)
    with open(target, "w", encoding="utf-8", newline="\n") as f:
        json.dump({"format": FORMAT, "version": VERSION, **forest.to_dict()}, f)
    return target


def load_forest(path: str | Path) -> ForestModel:
    with open(path, encoding="utf-8") as f:
        try:
            payload = json.load(f)
        except json.JSONDecodeError as exc:
            raise PersistenceError(f"'{path}' is not valid JSON: {exc}") from exc
    if payload.get("format") != FORMAT:
        raise PersistenceError(f"'{path}' is not a forest checkpoint.")
    if payload.get("version") != VERSION:
        raise PersistenceError(f"Unsupported forest version '{payload.get('version')}'.")
    try:
        return ForestModel.from_dict(payload)
    except (KeyError, TypeError) as exc:
        raise PersistenceError(f"Incomplete forest checkpoint '{path}': {exc}") from exc
