# 2026/09/07
"""
dataset.py - Labelled streaming datasets.

Defines EncodingTable, the persisted category -> code mapping of the
categorical columns, and Dataset, a time-ordered table of encoded feature
rows. Function 'assemble_dataset' merges per-scenario traces into a
Dataset, in d1 (multiclass) or d2 (binary) mode.

"""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Any, Iterable

import numpy as np
import pandas as pd

from uwids import etl
from uwids.errors import IntegrityError
from uwids.etl.common import (
    BASE_CATEGORIES,
    CATEGORICAL_COLUMNS,
    DATASET_HEADER,
    FEATURE_COLUMNS,
    LABEL_COLUMN,
    SCENARIO_LABELS,
    ScenarioTrace,
)
from uwids.features import FeatureDeriver, derive_features
from uwids.model import AttackKind
from uwids.util.frames import features_to_frame

logger = logging.getLogger(__name__)

D1_LABELS = frozenset(SCENARIO_LABELS.values())
D2_LABELS = frozenset({0, 1})


class EncodingTable:
    """Stable dictionary encoding of the categorical dataset columns.

    Known categories (BASE_CATEGORIES) get fixed codes; categories first
    seen while encoding get the next free code of their column.

    """

    def __init__(self, columns: dict[str, dict[str, int]] | None = None) -> None:
        self.columns: dict[str, dict[str, int]] = {}
        source = columns if columns is not None else BASE_CATEGORIES
        for column in CATEGORICAL_COLUMNS:
            mapping = source.get(column, {})
            if isinstance(mapping, list):
                mapping = {category: code for code, category in enumerate(mapping)}
            if len(set(mapping.values())) != len(mapping):
                raise IntegrityError(f"Duplicate codes in encoding of '{column}'.")
            self.columns[column] = {str(k): int(v) for k, v in mapping.items()}
        self._decoders = {
            column: {code: cat for cat, code in mapping.items()}
            for column, mapping in self.columns.items()
        }

    def encode(self, column: str, value: Any, *, extend: bool = True) -> int:
        """Code of `value` in `column`.

        Unknown values are added when `extend` is True, and raise
        IntegrityError otherwise.

        """
        mapping = self.columns[column]
        key = str(value)
        if key not in mapping:
            if not extend:
                raise IntegrityError(f"Unknown category '{key}' in column '{column}'.")
            code = max(mapping.values(), default=-1) + 1
            mapping[key] = code
            self._decoders[column][code] = key
            logger.debug("New category '%s' in '%s' encoded as %d", key, column, code)
        return mapping[key]

    def decode(self, column: str, code: int) -> str:
        try:
            return self._decoders[column][int(code)]
        except KeyError:
            raise IntegrityError(f"Unknown code '{code}' in column '{column}'.") from None

    def is_known(self, column: str, code: Any) -> bool:
        try:
            return int(code) == code and int(code) in self._decoders[column]
        except (TypeError, ValueError):
            return False

    def encode_frame(self, frame: pd.DataFrame, *, extend: bool = True) -> pd.DataFrame:
        """Returns a copy of `frame` with categorical columns encoded."""
        out = frame.copy()
        for column in CATEGORICAL_COLUMNS:
            out[column] = [self.encode(column, v, extend=extend) for v in frame[column]]
        return out

    def to_dict(self) -> dict[str, dict[str, int]]:
        return {column: dict(mapping) for column, mapping in self.columns.items()}

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EncodingTable):
            return NotImplemented
        return self.columns == other.columns


class Dataset:
    """Time-ordered table of encoded feature rows, with its encoding table.

    'mode' is 'd1' (labels 0..3) or 'd2' (labels 0/1). A Dataset read
    without labels (detection input) has 'mode' None.

    """

    def __init__(
        self,
        frame: pd.DataFrame,
        encoding: EncodingTable | None = None,
        mode: str | None = "d1",
    ) -> None:
        if mode not in ("d1", "d2", None):
            raise ValueError(f"Dataset mode must be 'd1' or 'd2', not '{mode}'.")
        self.frame = frame.reset_index(drop=True)
        self.encoding = encoding or EncodingTable()
        self.mode = mode
        self.source_path: Path | None = None
        if self.has_labels:
            self._check_labels()

    # Properties

    @property
    def has_labels(self) -> bool:
        return LABEL_COLUMN in self.frame.columns

    @property
    def feature_names(self) -> list[str]:
        return list(FEATURE_COLUMNS)

    def __len__(self) -> int:
        return len(self.frame)

    def features(self) -> np.ndarray:
        """Feature matrix, as floats, in dataset column order."""
        return self.frame[list(FEATURE_COLUMNS)].to_numpy(dtype=float)

    def labels(self) -> np.ndarray:
        if not self.has_labels:
            raise IntegrityError(f"Dataset has no '{LABEL_COLUMN}' column.")
        return self.frame[LABEL_COLUMN].to_numpy(dtype=int)

    def normal(self) -> Dataset:
        """Rows labelled 0."""
        return self._subset(self.frame[LABEL_COLUMN] == 0)

    # Transformations

    def to_d2(self) -> Dataset:
        """Binary projection: every attack class becomes 1."""
        frame = self.frame.copy()
        if self.has_labels:
            frame[LABEL_COLUMN] = (frame[LABEL_COLUMN] != 0).astype(int)
        return Dataset(frame, self.encoding, "d2" if self.has_labels else None)

    def split(self, train_fraction: float = 0.7) -> tuple[Dataset, Dataset]:
        """Chronological split: the first rows train, the rest test."""
        if not (0.0 < train_fraction < 1.0):
            raise ValueError(f"Train fraction must lie in (0, 1), not '{train_fraction}'.")
        cut = int(round(len(self) * train_fraction))
        return (
            Dataset(self.frame.iloc[:cut], self.encoding, self.mode),
            Dataset(self.frame.iloc[cut:], self.encoding, self.mode),
        )

    # ETL

    @classmethod
    def read(
        cls,
        path: str | Path,
        *,
        encoding_path: str | Path | None = None,
        require_label: bool = True,
    ) -> Dataset:
        """Reads a dataset CSV and its encoding sidecar.

        The sidecar defaults to '<stem>.encoding.json' next to the CSV; if
        missing, the base encoding is assumed.

        """
        path = Path(path)
        frame = etl.read_dataset(path, require_label=require_label)
        sidecar = Path(encoding_path) if encoding_path else encoding_path_for(path)
        if sidecar.exists():
            encoding = EncodingTable(etl.read_encoding(sidecar))
        else:
            logger.warning("No encoding table at '%s'; using the base encoding", sidecar)
            encoding = EncodingTable()

        mode = None
        if LABEL_COLUMN in frame.columns:
            mode = "d2" if set(frame[LABEL_COLUMN].unique()) <= D2_LABELS else "d1"
        dataset = cls(frame, encoding, mode)
        dataset.source_path = path
        return dataset

    def write(self, path: str | Path, *, overwrite: bool = False) -> Path:
        """Writes the dataset CSV and its encoding sidecar."""
        target = etl.write_dataset(path, self.frame, overwrite=overwrite)
        etl.write_encoding(encoding_path_for(target), self.encoding.to_dict(), overwrite=overwrite)
        return target

    # Auxiliar methods

    def _subset(self, mask: pd.Series) -> Dataset:
        return Dataset(self.frame[mask], self.encoding, self.mode)

    def _check_labels(self) -> None:
        allowed = D2_LABELS if self.mode == "d2" else D1_LABELS
        present = set(int(v) for v in self.frame[LABEL_COLUMN].unique())
        if not present <= allowed:
            raise IntegrityError(
                f"Labels {sorted(present - allowed)} outside {sorted(allowed)}."
            )

    def __repr__(self) -> str:
        return f"<Dataset {self.mode} rows={len(self)}>"


def encoding_path_for(path: str | Path) -> Path:
    path = Path(path)
    return path.with_name(f"{path.stem}.encoding.json")


def assemble_dataset(
    traces: Iterable[ScenarioTrace],
    mode: str = "d1",
    *,
    reset_per_scenario: bool = True,
    encoding: EncodingTable | None = None,
) -> Dataset:
    """Merges labelled scenario streams into one Dataset.

    Streams are concatenated in the given order, keeping time order within
    each. With `reset_per_scenario`, running counts restart for every
    scenario; otherwise one feature state spans the merge.

    """
    if mode not in ("d1", "d2"):
        raise ValueError(f"Dataset mode must be 'd1' or 'd2', not '{mode}'.")
    encoding = encoding or EncodingTable()
    deriver = FeatureDeriver()
    frames = []
    for trace in traces:
        if reset_per_scenario:
            deriver = FeatureDeriver()
        vectors = derive_features(
            trace.records,
            deriver=deriver,
            malicious=trace.malicious_ids,
            scenario=trace.scenario,
        )
        frame = features_to_frame(vectors)
        logger.info("Scenario %s: %d rows", AttackKind(trace.scenario).value, len(frame))
        frames.append(frame)

    if frames:
        merged = pd.concat(frames, ignore_index=True)
    else:
        merged = pd.DataFrame(columns=DATASET_HEADER)
    bad = set(int(v) for v in merged[LABEL_COLUMN].unique()) - D1_LABELS
    if bad:
        raise IntegrityError(f"Labels {sorted(bad)} outside {sorted(D1_LABELS)}.")

    dataset = Dataset(encoding.encode_frame(merged), encoding, "d1")
    return dataset.to_d2() if mode == "d2" else dataset
