# 2026/09/16
"""
pipeline.py - Hybrid intrusion detection pipeline.

Defines PipelineConfig, Stage, FinalVerdict, PipelineState, PipelineRun and
the functions 'final_decision', 'pipeline_step', 'build_state',
'save_state', 'load_state', 'run_pipeline' and 'write_run'.

Every record goes through:
1. the OCSVM gate; records it accepts are normal;
2. for gate outliers, the adaptive random forest; any attack class is final;
3. for forest-normal outliers, the bagged OCSVM ensemble, whose majority
decides.

Attack verdicts emit an IPS trigger. A kdq-tree watches the whole feature
stream; its drifts are logged and, by default, make every forest tree start a
background tree. With labels, the forest learns each gated record after
predicting it.

"""

from __future__ import annotations

import logging
import warnings
from collections import deque
from dataclasses import asdict, dataclass, field, fields
from enum import Enum
from pathlib import Path
from typing import Any

import numpy as np
from numpy.typing import ArrayLike

from uwids import etl
from uwids.anomaly import (
    OcsvmEnsemble,
    OcsvmModel,
    ensemble_vote,
    load_model,
    ocsvm_decision,
    save_model,
    train_bagged_ensemble,
    train_ocsvm,
)
from uwids.dataset import Dataset
from uwids.drift import KdqSlidingDetector
from uwids.errors import ConfigurationError, IntegrityError, InputRangeError, PersistenceError
from uwids.etl.common import CATEGORICAL_COLUMNS, FEATURE_COLUMNS
from uwids.learn import ForestConfig, ForestModel, load_forest, save_forest
from uwids.metrics import MetricsReport, compute_metrics

logger = logging.getLogger(__name__)

ATTACK_CLASSES = frozenset({1, 2, 3})
OUTPUT_FILES = ("verdicts.jsonl", "metrics.json", "drift_events.jsonl", "triggers.jsonl")
MODEL_FILES = ("gate.json", "ensemble.json", "forest.json")


@dataclass
class PipelineConfig:
    nu: float = 0.01
    gamma: float = 0.3
    ensemble_size: int = 11
    train_fraction: float = 0.7
    gate_train_cap: int = 2000
    kdq_window: int = 500
    kdq_stride: int = 100
    kdq_alpha: float = 0.05
    kdq_bootstrap: int = 500
    kdq_feeds_forest: bool = True
    learn: bool = True
    refit_every: int = 0
    ensemble_always: bool = False
    seed: int = 0

    def __post_init__(self) -> None:
        self.validate()

    def validate(self) -> None:
        if not (0.0 < self.nu <= 1.0):
            raise ConfigurationError(f"nu must lie in (0, 1], not '{self.nu}'.")
        if self.gamma <= 0:
            raise ConfigurationError(f"gamma must be positive, not '{self.gamma}'.")
        if self.ensemble_size < 1 or self.ensemble_size % 2 == 0:
            raise ConfigurationError(
                f"ensemble_size must be odd, not '{self.ensemble_size}'."
            )
        if not (0.0 < self.train_fraction < 1.0):
            raise ConfigurationError("train_fraction must lie in (0, 1).")
        if self.gate_train_cap < 2:
            raise ConfigurationError("gate_train_cap must be at least 2.")
        if self.refit_every < 0:
            raise ConfigurationError("refit_every cannot be negative.")

    @classmethod
    def from_mapping(cls, mapping: dict[str, Any]) -> PipelineConfig:
        unknown = set(mapping) - {f.name for f in fields(cls)}
        if unknown:
            raise ConfigurationError(
                f"Unknown pipeline keys: {', '.join(sorted(unknown))}."
            )
        return cls(**mapping)

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


class Stage(str, Enum):
    GATE_NORMAL = "gate_normal"
    ARF_ATTACK = "arf_attack"
    ENSEMBLE_OUTLIER = "ensemble_outlier"
    ENSEMBLE_INLIER = "ensemble_inlier"


ATTACK_STAGES = frozenset({Stage.ARF_ATTACK, Stage.ENSEMBLE_OUTLIER})


@dataclass(frozen=True)
class FinalVerdict:
    """Outcome of the pipeline for one record.

    'label' is 'attack' exactly when the stage is an attack stage.
    'attack_class' is the forest's class when the forest flagged the record.

    """

    stage: Stage
    attack_class: int | None = None
    index: int | None = field(default=None, compare=False)

    @property
    def is_attack(self) -> bool:
        return self.stage in ATTACK_STAGES

    @property
    def label(self) -> str:
        return "attack" if self.is_attack else "normal"

    def to_dict(self) -> dict[str, Any]:
        return {
            "index": self.index,
            "stage": self.stage.value,
            "label": self.label,
            "attack_class": self.attack_class,
        }


def final_decision(
    gate: int,
    arf: int | None = None,
    ensemble: int | None = None,
    *,
    unconditional: bool = False,
) -> FinalVerdict:
    """Combines the verdicts of the three stages.

    `gate` and `ensemble` are +1 (inlier) or -1 (outlier); `arf` is a class
    label, 0 for normal. The forest is consulted only for gate outliers, and
    the ensemble only for forest-normal outliers. With `unconditional`, the
    ensemble also reviews every record the forest did not flag, gate inliers
    included.

    """
    if gate not in (1, -1) or ensemble not in (None, 1, -1):
        raise InputRangeError(f"Verdicts must be +1 or -1, not '{gate}', '{ensemble}'.")
    if gate == 1:
        if arf is not None:
            raise InputRangeError("The forest does not see records the gate accepts.")
        if not unconditional:
            if ensemble is not None:
                raise InputRangeError("The ensemble does not see records the gate accepts.")
            return FinalVerdict(Stage.GATE_NORMAL)
        if ensemble is None:
            raise InputRangeError("Unconditional mode needs an ensemble verdict.")
        return FinalVerdict(Stage.ENSEMBLE_OUTLIER if ensemble == -1 else Stage.GATE_NORMAL)

    if arf is None:
        raise InputRangeError("Gate outliers need a forest label.")
    if arf in ATTACK_CLASSES:
        if ensemble is not None and not unconditional:
            raise InputRangeError("The ensemble does not see records the forest flags.")
        return FinalVerdict(Stage.ARF_ATTACK, attack_class=int(arf))
    if arf != 0:
        raise InputRangeError(f"Unknown forest label '{arf}'.")
    if ensemble is None:
        raise InputRangeError("Forest-normal outliers need an ensemble verdict.")
    return FinalVerdict(Stage.ENSEMBLE_OUTLIER if ensemble == -1 else Stage.ENSEMBLE_INLIER)


@dataclass
class PipelineState:
    gate: OcsvmModel
    forest: ForestModel
    ensemble: OcsvmEnsemble
    kdq: KdqSlidingDetector
    config: PipelineConfig = field(default_factory=PipelineConfig)
    processed: int = 0
    anomalies: int = 0
    attacks: int = 0
    triggers: list[dict[str, Any]] = field(default_factory=list)
    drift_events: list[dict[str, Any]] = field(default_factory=list)
    recent_normals: deque = field(default_factory=deque)

    def __post_init__(self) -> None:
        self.recent_normals = deque(self.recent_normals, maxlen=self.config.gate_train_cap)

    def counters(self) -> dict[str, int]:
        return {
            "processed": self.processed,
            "anomalies": self.anomalies,
            "attacks": self.attacks,
            "triggers": len(self.triggers),
        }


@dataclass
class PipelineRun:
    """Everything a run produced. 'truths' and 'metrics' are empty without
    labels."""

    verdicts: list[FinalVerdict]
    state: PipelineState
    truths: list[int] = field(default_factory=list)
    errors: list[dict[str, Any]] = field(default_factory=list)
    metrics: dict[str, MetricsReport] = field(default_factory=dict)
    out_dir: Path | None = None


def pipeline_step(
    state: PipelineState, x: ArrayLike, y: int | None = None, *, index: int | None = None
) -> FinalVerdict:
    """Runs one encoded feature vector through the pipeline.

    With a label `y` and 'config.learn' set, the forest learns the record
    after predicting it, when the gate sent it there.

    """
    config = state.config
    x = np.asarray(x, dtype=float).ravel()
    position = state.processed if index is None else index
    state.processed += 1

    signal = state.kdq.update(x)
    if signal.is_drift:
        started = state.forest.force_warning() if config.kdq_feeds_forest else 0
        state.drift_events.append(
            {
                "index": position,
                "detector": "kdqtree",
                "kind": signal.kind.value,
                "detail": {**signal.detail, "background_started": started},
            }
        )

    _, gate = ocsvm_decision(state.gate, x)
    arf = ensemble = None
    if gate == -1:
        arf, _ = state.forest.predict_one(x)
        if y is not None and config.learn:
            summary = state.forest.learn_one(x, int(y))
            if summary["drifts"]:
                state.drift_events.append(
                    {
                        "index": position,
                        "detector": "arf",
                        "kind": "drift",
                        "detail": {"trees_replaced": summary["drifts"]},
                    }
                )
    if arf == 0 or (config.ensemble_always and arf not in ATTACK_CLASSES):
        ensemble = ensemble_vote(state.ensemble, x)

    verdict = final_decision(gate, arf, ensemble, unconditional=config.ensemble_always)
    verdict = FinalVerdict(verdict.stage, verdict.attack_class, position)

    if gate == -1 or ensemble == -1:
        state.anomalies += 1
    if verdict.is_attack:
        state.attacks += 1
        state.triggers.append(
            {"index": position, "stage": verdict.stage.value, "attack_class": verdict.attack_class}
        )
    elif verdict.stage == Stage.GATE_NORMAL:
        state.recent_normals.append(x)

    if config.refit_every and state.processed % config.refit_every == 0:
        _refit_ensemble(state)
    return verdict


def build_state(
    train: Dataset,
    config: PipelineConfig | None = None,
    forest_config: ForestConfig | None = None,
    *,
    gate: OcsvmModel | None = None,
    ensemble: OcsvmEnsemble | None = None,
) -> PipelineState:
    """Trains every stage on a labelled training split.

    The gate and the ensemble learn from (at most 'gate_train_cap', evenly
    spaced) normal rows, unless already trained ones are given; the forest
    is warm-started on every row.

    """
    config = config or PipelineConfig()
    if not train.has_labels:
        raise IntegrityError("Training needs a labelled dataset.")
    normal = normal_rows(train, config.gate_train_cap)
    if gate is None:
        logger.info("Training the gate on %d normal rows", len(normal))
        gate = train_ocsvm(normal, config.nu, config.gamma)
    if ensemble is None:
        logger.info("Training the ensemble on %d normal rows", len(normal))
        ensemble = train_bagged_ensemble(
            normal, config.ensemble_size, config.nu, config.gamma, seed=config.seed
        )

    n_classes = 2 if train.mode == "d2" else 4
    forest = ForestModel(len(FEATURE_COLUMNS), n_classes, forest_config)
    logger.info("Warm-starting the forest on %d rows", len(train))
    for x, y in zip(train.features(), train.labels()):
        forest.learn_one(x, int(y))

    return PipelineState(
        gate, forest, ensemble, _kdq_detector(config), config, recent_normals=deque(normal)
    )


def normal_rows(train: Dataset, cap: int) -> np.ndarray:
    """Feature rows labelled normal, thinned to at most `cap` evenly spaced
    ones."""
    normal = train.normal().features()
    if len(normal) <= cap:
        return normal
    return normal[np.linspace(0, len(normal) - 1, cap).round().astype(int)]


def save_state(state: PipelineState, out_dir: str | Path, *, overwrite: bool = False) -> Path:
    """Writes the trained gate, ensemble and forest as MODEL_FILES."""
    out_dir = Path(out_dir)
    gate, ensemble, forest = (out_dir / name for name in MODEL_FILES)
    save_model(gate, state.gate, overwrite=overwrite)
    save_model(ensemble, state.ensemble, overwrite=overwrite)
    save_forest(forest, state.forest, overwrite=overwrite)
    return out_dir


def load_state(model_dir: str | Path, config: PipelineConfig | None = None) -> PipelineState:
    """Reads the stages written by 'save_state'; the kdq-tree starts empty."""
    model_dir = Path(model_dir)
    config = config or PipelineConfig()
    gate, ensemble, forest = (model_dir / name for name in MODEL_FILES)
    gate, ensemble = load_model(gate), load_model(ensemble)
    if not isinstance(gate, OcsvmModel) or not isinstance(ensemble, OcsvmEnsemble):
        raise PersistenceError(f"'{model_dir}' does not hold a gate and an ensemble.")
    return PipelineState(gate, load_forest(forest), ensemble, _kdq_detector(config), config)


def run_pipeline(
    dataset: Dataset,
    config: PipelineConfig | None = None,
    *,
    forest_config: ForestConfig | None = None,
    mode: str = "train-eval",
    state: PipelineState | None = None,
    out_dir: str | Path | None = None,
    overwrite: bool = False,
    verbose: int = 1,
) -> PipelineRun:
    """Runs the pipeline over a dataset.

    In 'train-eval' mode, the dataset is split chronologically, every stage
    is trained on the first part (unless `state` already holds trained
    stages) and the second part is streamed through the pipeline. In
    'detect' mode, `state` holds trained stages, the whole dataset is
    streamed and the forest does not learn.

    Rows whose categorical codes are not in the dataset encoding are set
    aside in 'errors' and, when `verbose` >= 1, reported with a warning.

    With labels, the run also scores the gate alone and the forest alone on
    the same rows. With `out_dir`, the outputs listed in OUTPUT_FILES are
    written there.

    """
    config = config or (state.config if state is not None else PipelineConfig())
    if mode == "train-eval":
        if not dataset.has_labels:
            raise IntegrityError("train-eval mode needs a labelled dataset.")
        train, test = dataset.split(config.train_fraction)
        if state is None:
            state = build_state(train, config, forest_config)
        state.config = config
    elif mode == "detect":
        if state is None:
            raise ConfigurationError("detect mode needs trained pipeline stages.")
        config = state.config = PipelineConfig.from_mapping({**config.to_dict(), "learn": False})
        test = dataset
    else:
        raise ConfigurationError(f"Unknown pipeline mode '{mode}'.")

    features = test.features()
    labels = test.labels() if test.has_labels else None
    codes = test.frame[CATEGORICAL_COLUMNS].to_numpy()
    offset = len(dataset) - len(test)

    verdicts, errors, rows, truths = [], [], [], []
    for i, x in enumerate(features):
        index = offset + i
        unknown = [
            column
            for column, code in zip(CATEGORICAL_COLUMNS, codes[i])
            if not test.encoding.is_known(column, code)
        ]
        if unknown:
            message = f"Row {index}: unencoded value in {', '.join(unknown)}"
            errors.append({"index": index, "error": message})
            if verbose >= 1:
                warnings.warn(f"{message}. It will be skipped.", UserWarning)
            continue

        y = int(labels[i]) if labels is not None else None
        if y is not None:
            arf_alone, _ = state.forest.predict_one(x)
            gate_score, _ = ocsvm_decision(state.gate, x)
            rows.append((i, y, arf_alone, gate_score))
            truths.append(y)
        verdicts.append(pipeline_step(state, x, y, index=index))

    run = PipelineRun(verdicts, state, truths, errors)
    if rows:
        run.metrics = _score(verdicts, rows)
    logger.info("Pipeline processed %d rows: %s", len(test), state.counters())
    if out_dir is not None:
        run.out_dir = write_run(run, out_dir, overwrite=overwrite)
    return run


def write_run(run: PipelineRun, out_dir: str | Path, *, overwrite: bool = False) -> Path:
    """Writes the verdict log, metrics, drift events and triggers of a run."""
    out_dir = Path(out_dir)
    verdicts, metrics, drift_events, triggers = (out_dir / name for name in OUTPUT_FILES)
    truths = run.truths or [None] * len(run.verdicts)
    etl.write_jsonl(
        verdicts,
        ({**v.to_dict(), "truth": t} for v, t in zip(run.verdicts, truths)),
        overwrite=overwrite,
    )
    etl.write_json(
        metrics,
        {
            "models": {name: report.to_dict() for name, report in run.metrics.items()},
            "counters": run.state.counters(),
            "errors": run.errors,
            "config": run.state.config.to_dict(),
            "forest": {
                "warnings": run.state.forest.n_warnings,
                "drifts": run.state.forest.n_drifts,
            },
        },
        overwrite=overwrite,
    )
    etl.write_jsonl(drift_events, run.state.drift_events, overwrite=overwrite)
    etl.write_jsonl(triggers, run.state.triggers, overwrite=overwrite)
    return out_dir


# Auxiliar functions


def _score(verdicts: list[FinalVerdict], rows: list[tuple]) -> dict[str, MetricsReport]:
    """Hybrid, gate-alone and forest-alone metrics on the labelled rows."""
    _, truths, arf_alone, gate_scores = (np.asarray(col) for col in zip(*rows))
    binary_truth = (truths != 0).astype(int)
    hybrid = np.array([int(v.is_attack) for v in verdicts])
    gate_pred = (gate_scores < 0).astype(int)
    return {
        "ocsvm": compute_metrics(gate_pred, binary_truth, scores=-gate_scores),
        "arf": compute_metrics(arf_alone, truths),
        "hybrid": compute_metrics(hybrid, binary_truth),
    }


def _kdq_detector(config: PipelineConfig) -> KdqSlidingDetector:
    return KdqSlidingDetector(
        config.kdq_window,
        config.kdq_alpha,
        config.kdq_bootstrap,
        stride=config.kdq_stride,
        seed=config.seed,
    )


def _refit_ensemble(state: PipelineState) -> None:
    if len(state.recent_normals) < 2:
        return
    data = np.vstack(state.recent_normals)
    if np.all(data == data[0]):
        return
    state.ensemble = train_bagged_ensemble(
        data,
        state.config.ensemble_size,
        state.config.nu,
        state.config.gamma,
        seed=state.config.seed + state.processed,
    )
    logger.info("Ensemble refit on %d recent normal rows", len(data))
