# 2026/09/21
"""
experiments.py - Experiment orchestration.

Defines the functions:
- 'scenario_configs' and 'generate_scenarios', which simulate the normal,
blackhole, grayhole and flooding scenarios of one topology, and
'read_scenarios', which reads them back;
- 'benchmark_anomaly', which compares the OCSVM and the Isolation Forest;
- 'drift_comparison', which runs the univariate detectors over the synthetic
drift kinds;
- 'drift_resilience', which compares an adapting forest against a frozen one
after a concept flip;
- 'sweep', which runs the pipeline over a grid of forest sizes and per-tree
detectors.

Each one returns its results and, given `out_dir`, also writes them there
under the names in ARTIFACTS.

"""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
import pandas as pd

from uwids import etl
from uwids.anomaly import train_iforest, train_ocsvm
from uwids.dataset import Dataset
from uwids.drift import DriftKind, label_flip_stream, make_detector, synth_drift_stream
from uwids.errors import ConfigurationError, IntegrityError
from uwids.etl.common import SCENARIO_ORDER, ScenarioTrace
from uwids.learn import ForestConfig, ForestModel, prequential_evaluate
from uwids.metrics import MetricsReport, compute_metrics
from uwids.model import AttackKind, SimConfig
from uwids.pipeline import PipelineConfig, build_state, normal_rows, run_pipeline
from uwids.sim import attack_roles, build_topology, choose_malicious_ids, run_simulation
from uwids.util import dict_product

logger = logging.getLogger(__name__)

ARTIFACTS = {
    "trace": "trace_{scenario}.csv",
    "manifest": "scenarios.json",
    "benchmark": "benchmark.json",
    "drift_comparison": "drift_comparison.csv",
    "drift_resilience": "drift_resilience.csv",
    "sweep": "sweep.csv",
}

OOD_NODE_COUNT = 64
OOD_MALICIOUS_FRACTION = 0.2

SWEEP_TREES = (20, 40, 60, 80, 100)
SWEEP_DETECTORS = ("adwin", "ddm", "kswin", "page_hinkley")
COMPARED_DETECTORS = ("adwin", "ddm", "kswin", "page_hinkley")


def scenario_configs(config: SimConfig, *, ood: bool = False) -> list[SimConfig]:
    """One configuration per scenario, in SCENARIO_ORDER, on the topology of
    `config`.

    Malicious ids default to the topology's attack roles. With `ood`, the
    network has OOD_NODE_COUNT nodes, OOD_MALICIOUS_FRACTION of which are
    malicious, dealt in turn to blackhole, grayhole and flooding.

    """
    base = {**config.to_dict(), "attack_kind": AttackKind.NONE, "malicious_ids": ()}
    if ood:
        base["node_count"] = OOD_NODE_COUNT
    base_config = SimConfig.from_mapping(base)
    nodes = build_topology(base_config)

    attacks = [kind for kind in SCENARIO_ORDER if kind != AttackKind.NONE]
    if ood:
        chosen = sorted(
            choose_malicious_ids(OOD_NODE_COUNT, OOD_MALICIOUS_FRACTION, config.rng_seed)
        )
        roles = {kind: frozenset(chosen[i :: len(attacks)]) for i, kind in enumerate(attacks)}
    else:
        roles = {kind: attack_roles(nodes, base_config, kind) for kind in attacks}

    configs = []
    for kind in SCENARIO_ORDER:
        if kind == AttackKind.NONE:
            configs.append(base_config)
        else:
            configs.append(
                SimConfig.from_mapping({**base, "attack_kind": kind, "malicious_ids": roles[kind]})
            )
    return configs


def generate_scenarios(
    config: SimConfig,
    out_dir: str | Path | None = None,
    *,
    ood: bool = False,
    overwrite: bool = False,
) -> list[ScenarioTrace]:
    """Simulates every scenario of 'scenario_configs'.

    With `out_dir`, writes one trace CSV per scenario and a manifest listing,
    for each trace, its scenario, its malicious ids and the configuration it
    was simulated with.

    """
    traces, manifest = [], []
    for scenario in scenario_configs(config, ood=ood):
        records = run_simulation(scenario)
        trace = ScenarioTrace(scenario.attack_kind, scenario.malicious_ids, records)
        traces.append(trace)
        if out_dir is not None:
            path = etl.write_trace(
                Path(out_dir) / ARTIFACTS["trace"],
                records,
                overwrite=overwrite,
                scenario=scenario.attack_kind.value,
            )
            manifest.append(
                {
                    "scenario": scenario.attack_kind.value,
                    "malicious_ids": sorted(scenario.malicious_ids),
                    "trace": path.name,
                    "config": scenario.to_dict(),
                }
            )
    if out_dir is not None:
        etl.write_json(
            Path(out_dir) / ARTIFACTS["manifest"], {"scenarios": manifest}, overwrite=overwrite
        )
    return traces


def read_scenarios(manifest_path: str | Path) -> list[ScenarioTrace]:
    """Reads back the traces listed in a manifest written by
    'generate_scenarios', in manifest order."""
    manifest_path = Path(manifest_path)
    with open(manifest_path, encoding="utf-8") as f:
        entries = json.load(f)["scenarios"]
    return [
        ScenarioTrace(
            AttackKind(entry["scenario"]),
            frozenset(entry["malicious_ids"]),
            etl.read_trace(manifest_path.parent / entry["trace"]),
        )
        for entry in entries
    ]


def benchmark_anomaly(
    dataset: Dataset,
    *,
    nu: float = 0.01,
    gamma: float = 0.3,
    trees: int = 100,
    contamination: float = 0.01,
    train_fraction: float = 0.7,
    train_cap: int = 2000,
    seed: int = 0,
    out_dir: str | Path | None = None,
    overwrite: bool = False,
) -> dict[str, MetricsReport]:
    """Trains the OCSVM and the Isolation Forest on the normal rows of the
    training split and scores both on the test split (attack = positive)."""
    if not dataset.has_labels:
        raise IntegrityError("The benchmark needs a labelled dataset.")
    train, test = dataset.split(train_fraction)
    normal = normal_rows(train, train_cap)
    features, truths = test.features(), (test.labels() != 0).astype(int)

    ocsvm = train_ocsvm(normal, nu, gamma)
    iforest = train_iforest(normal, trees, contamination=contamination, seed=seed)
    ocsvm_scores = ocsvm.decision_function(features)
    iforest_scores = iforest.score_samples(features)
    reports = {
        "ocsvm": compute_metrics(
            (ocsvm_scores < 0).astype(int), truths, scores=-ocsvm_scores
        ),
        "iforest": compute_metrics(
            (iforest.predict(features) == -1).astype(int), truths, scores=-iforest_scores
        ),
    }
    if out_dir is not None:
        etl.write_json(
            Path(out_dir) / ARTIFACTS["benchmark"],
            {"models": {name: r.to_dict() for name, r in reports.items()}},
            overwrite=overwrite,
        )
    return reports


def drift_comparison(
    *,
    kinds: Iterable[DriftKind | str] = tuple(DriftKind),
    detectors: Iterable[str] = COMPARED_DETECTORS,
    seeds: Iterable[int] = range(10),
    length: int = 10_000,
    tolerance: int = 1000,
    out_dir: str | Path | None = None,
    overwrite: bool = False,
) -> pd.DataFrame:
    """Runs each detector over each synthetic drift kind.

    A change point counts as found when a drift is signalled within
    `tolerance` samples from it (and before the next change point). Drifts
    outside every such span are false alarms. 'delay' is the mean delay of
    the found change points, NaN when none was found.

    """
    if tolerance < 1:
        raise ConfigurationError(f"tolerance must be positive, not '{tolerance}'.")
    rows = []
    for params in dict_product(
        {"kind": [DriftKind(k) for k in kinds], "detector": list(detectors), "seed": list(seeds)}
    ):
        stream = synth_drift_stream(params["kind"], length, params["seed"])
        detector = make_detector(params["detector"])
        drifts = [
            t for t, value in enumerate(stream.values) if detector.update(float(value)).is_drift
        ]
        found, false_alarms, delays = _match_detections(drifts, stream.change_points, tolerance)
        rows.append(
            {
                "kind": params["kind"].value,
                "detector": params["detector"],
                "seed": params["seed"],
                "changes": len(stream.change_points),
                "detections": len(drifts),
                "found": found,
                "false_alarms": false_alarms,
                "delay": float(np.mean(delays)) if delays else float("nan"),
            }
        )
    frame = pd.DataFrame(rows)
    if out_dir is not None:
        _write_csv(frame, Path(out_dir) / ARTIFACTS["drift_comparison"], overwrite)
    return frame


def drift_resilience(
    *,
    seeds: Iterable[int] = range(20),
    length: int = 6000,
    flip_at: int = 3000,
    horizon: int = 2000,
    window: int = 500,
    forest_config: ForestConfig | None = None,
    out_dir: str | Path | None = None,
    overwrite: bool = False,
) -> pd.DataFrame:
    """Windowed accuracy `horizon` samples after a concept flip, for a
    forest that keeps learning and for a copy frozen at the flip."""
    if not (0 < flip_at < length) or flip_at + horizon > length:
        raise ConfigurationError("The flip and the horizon must fall inside the stream.")
    forest_config = forest_config or ForestConfig(n_trees=10)
    rows = []
    for seed in seeds:
        x, y = label_flip_stream(length, flip_at, seed)
        config = ForestConfig.from_mapping({**forest_config.to_dict(), "seed": seed})
        adaptive = ForestModel(x.shape[1], 2, config)
        frozen = ForestModel(x.shape[1], 2, config)
        for xi, yi in zip(x[:flip_at], y[:flip_at]):
            frozen.learn_one(xi, int(yi))
        live = prequential_evaluate(zip(x, y), adaptive, window)
        still = prequential_evaluate(zip(x[flip_at:], y[flip_at:]), frozen, window, learn=False)
        at = flip_at + horizon - 1
        rows.append(
            {
                "seed": seed,
                "adaptive": float(live["window_accuracy"].iloc[at]),
                "frozen": float(still["window_accuracy"].iloc[at - flip_at]),
                "drifts": adaptive.n_drifts,
            }
        )
    frame = pd.DataFrame(rows)
    frame["adaptive_wins"] = frame["adaptive"] > frame["frozen"]
    if out_dir is not None:
        _write_csv(frame, Path(out_dir) / ARTIFACTS["drift_resilience"], overwrite)
    return frame


def sweep(
    dataset: Dataset,
    *,
    trees: Sequence[int] = SWEEP_TREES,
    detectors: Sequence[str] = SWEEP_DETECTORS,
    config: PipelineConfig | None = None,
    forest_config: ForestConfig | None = None,
    out_dir: str | Path | None = None,
    overwrite: bool = False,
) -> pd.DataFrame:
    """Runs the pipeline once per (tree count, per-tree detector) pair.

    The gate and the ensemble are trained once and shared by every run.
    Each row holds the forest-alone and the hybrid TPR, FPR and accuracy on
    the test split.

    """
    config = config or PipelineConfig()
    forest_config = forest_config or ForestConfig()
    train, _ = dataset.split(config.train_fraction)

    rows, shared = [], None
    for params in dict_product({"n_trees": list(trees), "detector": list(detectors)}):
        logger.info("Sweep: %d trees with %s", params["n_trees"], params["detector"])
        grid_config = ForestConfig.from_mapping(
            {
                **forest_config.to_dict(),
                "n_trees": params["n_trees"],
                "drift_detector": params["detector"],
            }
        )
        state = build_state(
            train,
            config,
            grid_config,
            gate=shared.gate if shared else None,
            ensemble=shared.ensemble if shared else None,
        )
        shared = shared or state
        run = run_pipeline(dataset, config, state=state, verbose=0)
        arf, hybrid = run.metrics["arf"], run.metrics["hybrid"]
        rows.append(
            {
                "n_trees": params["n_trees"],
                "detector": params["detector"],
                "tpr": arf.tpr,
                "fpr": arf.fpr,
                "accuracy": arf.accuracy,
                "hybrid_tpr": hybrid.tpr,
                "hybrid_fpr": hybrid.fpr,
                "hybrid_accuracy": hybrid.accuracy,
                "drifts": state.forest.n_drifts,
            }
        )
    frame = pd.DataFrame(rows)
    if out_dir is not None:
        _write_csv(frame, Path(out_dir) / ARTIFACTS["sweep"], overwrite)
    return frame


# Auxiliar functions


def _match_detections(
    drifts: list[int], change_points: list[int], tolerance: int
) -> tuple[int, int, list[int]]:
    """(found change points, false alarms, delays of the found ones)."""
    matched: set[int] = set()
    delays = []
    bounds = [*change_points[1:], None]
    for cp, next_cp in zip(change_points, bounds):
        end = cp + tolerance if next_cp is None else min(cp + tolerance, next_cp)
        hits = [t for t in drifts if cp <= t < end and t not in matched]
        if hits:
            matched.add(hits[0])
            delays.append(hits[0] - cp)
        matched.update(hits)
    found = len(delays)
    return found, len(drifts) - len(matched), delays


def _write_csv(frame: pd.DataFrame, path: Path, overwrite: bool) -> Path:
    target = etl.process_path(path, overwrite)
    frame.to_csv(target, index=False, lineterminator="\n", float_format="%.6f")
    return target
