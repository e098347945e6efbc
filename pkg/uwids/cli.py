# 2026/09/23
"""
cli.py - Command line interface.

Defines function 'main', the 'uwids' console script, with one subcommand
per workbench task: sim, featurize, train-anomaly, train-forest,
run-pipeline, drift-scan, synth-stream, sweep, ips-demo and report.

Global options (before the subcommand): '--seed', '--out', '--config',
'--overwrite' and '-v' (repeatable).

Exit codes: 0 success, 1 usage error, 2 data error (invalid configuration
or input, missing or existing file), 3 internal error.

"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Sequence

import numpy as np
import pandas as pd

from uwids import etl, experiments, ips, report
from uwids.anomaly import save_model, train_bagged_ensemble, train_ocsvm
from uwids.config import SECTIONS, load_config
from uwids.dataset import Dataset, assemble_dataset
from uwids.drift import (
    DETECTORS,
    DriftKind,
    KdqSlidingDetector,
    SignalKind,
    make_detector,
    synth_drift_stream,
)
from uwids.errors import ConfigurationError, UwidsError
from uwids.etl.common import FEATURE_COLUMNS, LABEL_COLUMN
from uwids.learn import ForestConfig, ForestModel, prequential_evaluate, save_forest
from uwids.metrics import compute_metrics
from uwids.model import SimConfig
from uwids.pipeline import (
    MODEL_FILES,
    PipelineConfig,
    load_state,
    normal_rows,
    run_pipeline,
    save_state,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_INTERNAL = 3

LOG_LEVELS = {0: logging.WARNING, 1: logging.INFO, 2: logging.DEBUG}
DATASET_FILE = "dataset.csv"
DRIFT_EVENTS_FILE = "drift_events.jsonl"


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE

    logging.basicConfig(
        level=LOG_LEVELS[min(args.verbose, 2)],
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.handler(args) or EXIT_OK
    except (FileNotFoundError, FileExistsError) as exc:
        logger.error("%s", exc)
        return EXIT_DATA
    except UwidsError as exc:
        logger.error("%s: %s", type(exc).__name__, exc)
        return EXIT_DATA if isinstance(exc, ValueError) else EXIT_INTERNAL
    except Exception:
        logger.exception("Internal error")
        return EXIT_INTERNAL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="uwids", description="Underwater network intrusion detection workbench"
    )
    parser.add_argument("--seed", type=int, default=None, help="Seed for every random source")
    parser.add_argument("--out", type=Path, default=Path("."), help="Output directory")
    parser.add_argument("--config", type=Path, default=None, help="YAML configuration file")
    parser.add_argument("--overwrite", action="store_true", help="Replace existing outputs")
    parser.add_argument(
        "-v", "--verbose", action="count", default=0, help="-v for info, -vv for debug"
    )
    # Subcommand copies keep the top-level values unless given after the command
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("--out", type=Path, default=argparse.SUPPRESS)
    common.add_argument("--config", type=Path, default=argparse.SUPPRESS)

    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("sim", parents=[common], help="Simulate the four scenarios into trace files")
    p.add_argument("--nodes", type=int, default=None)
    p.add_argument("--duration", type=float, default=None)
    p.add_argument("--interval", type=float, default=None)
    p.add_argument("--ood", action="store_true", help="64 nodes, 20%% of them malicious")
    p.set_defaults(handler=cmd_sim)

    p = sub.add_parser("featurize", parents=[common], help="Build a dataset from simulated traces")
    p.add_argument("--manifest", type=Path, default=None, help="Defaults to <out>/scenarios.json")
    p.add_argument("--mode", choices=["d1", "d2"], default="d1")
    p.set_defaults(handler=cmd_featurize)

    p = sub.add_parser("train-anomaly", parents=[common], help="Train the OCSVM gate and ensemble")
    p.add_argument("--dataset", type=Path, required=True)
    p.add_argument("--benchmark", action="store_true", help="Also compare with Isolation Forest")
    p.set_defaults(handler=cmd_train_anomaly)

    p = sub.add_parser(
        "train-forest", parents=[common], help="Train and evaluate the adaptive random forest"
    )
    p.add_argument("--dataset", type=Path, required=True)
    p.add_argument("--trees", type=int, default=None)
    p.add_argument("--detector", choices=sorted(DETECTORS), default=None)
    p.add_argument("--delta-warning", type=float, default=None)
    p.add_argument("--delta-drift", type=float, default=None)
    p.add_argument("--split-confidence", type=float, default=None)
    p.set_defaults(handler=cmd_train_forest)

    p = sub.add_parser("run-pipeline", parents=[common], help="Run the hybrid detection pipeline")
    p.add_argument("--dataset", type=Path, required=True)
    p.add_argument("--mode", choices=["train-eval", "detect"], default="train-eval")
    p.add_argument("--models", type=Path, default=None, help="Trained stages for detect mode")
    p.add_argument("--ensemble-always", action="store_true")
    p.add_argument("--refit-every", type=int, default=None)
    p.set_defaults(handler=cmd_run_pipeline)

    p = sub.add_parser(
        "drift-scan", parents=[common], help="Scan a dataset for drift or compare detectors"
    )
    p.add_argument("--dataset", type=Path, default=None)
    p.add_argument(
        "--detector",
        choices=[KdqSlidingDetector.name, *sorted(DETECTORS)],
        default=KdqSlidingDetector.name,
        help="kdqtree scans every feature; the others one --column",
    )
    p.add_argument("--column", default=None, help="Numeric column for univariate detectors")
    p.add_argument("--compare", action="store_true", help="Detector comparison on synthetic drift")
    p.add_argument("--resilience", action="store_true", help="Adaptive vs frozen forest")
    p.add_argument("--window", type=int, default=None)
    p.add_argument("--stride", type=int, default=None)
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--trials", type=int, default=10)
    p.set_defaults(handler=cmd_drift_scan)

    p = sub.add_parser("synth-stream", parents=[common], help="Write a synthetic drift stream")
    p.add_argument("--kind", choices=[k.value for k in DriftKind], default="abrupt")
    p.add_argument("--length", type=int, default=10_000)
    p.add_argument(
        "--detector", choices=sorted(DETECTORS), default=None, help="Also run it on the stream"
    )
    p.set_defaults(handler=cmd_synth_stream)

    p = sub.add_parser("sweep", parents=[common], help="Forest size x drift detector grid")
    p.add_argument("--dataset", type=Path, required=True)
    p.add_argument("--trees", type=int, nargs="+", default=list(experiments.SWEEP_TREES))
    p.add_argument("--detectors", nargs="+", default=list(experiments.SWEEP_DETECTORS))
    p.set_defaults(handler=cmd_sweep)

    p = sub.add_parser("ips-demo", parents=[common], help="Play the key reset scenarios")
    p.add_argument("--scenario", choices=list(ips.SCENARIOS), nargs="+", default=None)
    p.add_argument("--trials", type=int, default=1)
    p.set_defaults(handler=cmd_ips_demo)

    p = sub.add_parser("report", parents=[common], help="Summarize a run directory")
    p.add_argument("--run", type=Path, default=None, help="Defaults to --out")
    p.add_argument("--window", type=int, default=report.TIMESERIES_WINDOW)
    p.set_defaults(handler=cmd_report)

    return parser


# Commands


def cmd_sim(args: argparse.Namespace) -> int:
    traces = experiments.generate_scenarios(
        _sim_config(args), args.out, ood=args.ood, overwrite=args.overwrite
    )
    for trace in traces:
        print(
            f"{trace.scenario.value}: {len(trace.records)} records, "
            f"malicious {sorted(trace.malicious_ids)}"
        )
    return EXIT_OK


def cmd_featurize(args: argparse.Namespace) -> int:
    manifest = args.manifest or args.out / experiments.ARTIFACTS["manifest"]
    dataset = assemble_dataset(experiments.read_scenarios(manifest), args.mode)
    path = dataset.write(args.out / DATASET_FILE, overwrite=args.overwrite)
    counts = dataset.frame[LABEL_COLUMN].value_counts().sort_index()
    labels = {int(k): int(v) for k, v in counts.items()}
    print(f"{path}: {len(dataset)} rows, labels {labels}")
    return EXIT_OK


def cmd_train_anomaly(args: argparse.Namespace) -> int:
    config = _pipeline_config(args)
    train, _ = Dataset.read(args.dataset).split(config.train_fraction)
    normal = normal_rows(train, config.gate_train_cap)
    gate = train_ocsvm(normal, config.nu, config.gamma)
    ensemble = train_bagged_ensemble(
        normal, config.ensemble_size, config.nu, config.gamma, seed=config.seed
    )
    save_model(args.out / MODEL_FILES[0], gate, overwrite=args.overwrite)
    save_model(args.out / MODEL_FILES[1], ensemble, overwrite=args.overwrite)
    outliers = float(np.mean(gate.predict(normal) == -1))
    print(f"Gate: {gate!r}, training outlier fraction {outliers:.4f}")

    if args.benchmark:
        reports = experiments.benchmark_anomaly(
            Dataset.read(args.dataset),
            nu=config.nu,
            gamma=config.gamma,
            train_fraction=config.train_fraction,
            train_cap=config.gate_train_cap,
            seed=config.seed,
            out_dir=args.out,
            overwrite=args.overwrite,
        )
        _print_reports(reports)
    return EXIT_OK


def cmd_train_forest(args: argparse.Namespace) -> int:
    config = _pipeline_config(args)
    forest_config = _forest_config(
        args,
        n_trees=args.trees,
        drift_detector=args.detector,
        delta_warning=args.delta_warning,
        delta_drift=args.delta_drift,
        split_confidence=args.split_confidence,
    )
    dataset = Dataset.read(args.dataset)
    train, test = dataset.split(config.train_fraction)
    n_classes = 2 if dataset.mode == "d2" else 4
    forest = ForestModel(len(FEATURE_COLUMNS), n_classes, forest_config)
    for x, y in zip(train.features(), train.labels()):
        forest.learn_one(x, int(y))

    series = prequential_evaluate(zip(test.features(), test.labels()), forest)
    target = etl.process_path(args.out / "prequential.csv", args.overwrite)
    series.to_csv(target, lineterminator="\n", float_format="%.6f")
    save_forest(args.out / MODEL_FILES[2], forest, overwrite=args.overwrite)
    _print_reports({"arf": compute_metrics(series["y_pred"], series["y"])})
    return EXIT_OK


def cmd_run_pipeline(args: argparse.Namespace) -> int:
    config = _pipeline_config(
        args, ensemble_always=args.ensemble_always or None, refit_every=args.refit_every
    )
    dataset = Dataset.read(args.dataset, require_label=args.mode == "train-eval")
    state = None
    if args.mode == "detect":
        state = load_state(args.models or args.out, config)
    run = run_pipeline(
        dataset,
        config,
        forest_config=_forest_config(args),
        mode=args.mode,
        state=state,
        out_dir=args.out,
        overwrite=args.overwrite,
        verbose=args.verbose + 1,
    )
    if args.mode == "train-eval":
        save_state(run.state, args.out, overwrite=args.overwrite)
    print(f"Counters: {run.state.counters()}, errors: {len(run.errors)}")
    _print_reports(run.metrics)
    return EXIT_OK


def cmd_drift_scan(args: argparse.Namespace) -> int:
    if args.compare or args.resilience:
        seeds = range(_seed(args), _seed(args) + args.trials)
        if args.compare:
            frame = experiments.drift_comparison(
                seeds=seeds, out_dir=args.out, overwrite=args.overwrite
            )
            print(frame.groupby(["kind", "detector"])[["found", "false_alarms"]].sum())
        if args.resilience:
            frame = experiments.drift_resilience(
                seeds=seeds, out_dir=args.out, overwrite=args.overwrite
            )
            print(frame.to_string(index=False))
        return EXIT_OK
    if args.dataset is None:
        raise ConfigurationError("drift-scan needs --dataset, --compare or --resilience.")

    dataset = Dataset.read(args.dataset, require_label=False)
    if args.detector == KdqSlidingDetector.name:
        config = _pipeline_config(
            args, kdq_window=args.window, kdq_stride=args.stride, kdq_alpha=args.alpha
        )
        detector = KdqSlidingDetector(
            config.kdq_window,
            config.kdq_alpha,
            config.kdq_bootstrap,
            stride=config.kdq_stride,
            seed=config.seed,
        )
        stream = dataset.features()
    else:
        if args.column not in dataset.frame.columns:
            raise ConfigurationError(
                f"Detector '{args.detector}' needs --column, one of {list(dataset.frame.columns)}."
            )
        detector = make_detector(args.detector)
        stream = pd.to_numeric(dataset.frame[args.column]).to_numpy(dtype=float)

    events = []
    for x in stream:
        signal = detector.update(x)
        if signal.kind != SignalKind.STABLE:
            events.append(
                {
                    "index": signal.position,
                    "detector": detector.name,
                    "kind": signal.kind.value,
                    "detail": signal.detail,
                }
            )
    etl.write_jsonl(args.out / DRIFT_EVENTS_FILE, events, overwrite=args.overwrite)
    drifts = sum(e["kind"] == SignalKind.DRIFT.value for e in events)
    print(f"{drifts} drifts, {len(events) - drifts} warnings")
    return EXIT_OK


def cmd_synth_stream(args: argparse.Namespace) -> int:
    stream = synth_drift_stream(args.kind, args.length, _seed(args))
    frame = pd.DataFrame({"value": stream.values.astype(int), "rate": stream.rates})
    if args.detector:
        detector = make_detector(args.detector)
        frame["signal"] = [detector.update(float(v)).kind.value for v in stream.values]
    target = etl.process_path(args.out / f"synth_{args.kind}.csv", args.overwrite)
    frame.rename_axis("index").to_csv(target, lineterminator="\n", float_format="%.6f")
    etl.write_json(
        args.out / f"synth_{args.kind}.json", stream.to_dict(), overwrite=args.overwrite
    )
    print(f"{target}: change points {stream.change_points}")
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace) -> int:
    frame = experiments.sweep(
        Dataset.read(args.dataset),
        trees=args.trees,
        detectors=args.detectors,
        config=_pipeline_config(args),
        forest_config=_forest_config(args),
        out_dir=args.out,
        overwrite=args.overwrite,
    )
    print(report.sweep_grid(frame).to_string())
    return EXIT_OK


def cmd_ips_demo(args: argparse.Namespace) -> int:
    results = ips.run_demo(args.scenario, seed=_seed(args), trials=args.trials)
    print(ips.format_table(results))
    failed = [r.scenario for r in results if not r.passed]
    if failed:
        logger.error("Scenarios behaving unexpectedly: %s", ", ".join(failed))
        return EXIT_INTERNAL
    return EXIT_OK


def cmd_report(args: argparse.Namespace) -> int:
    for path in report.emit_report(args.run or args.out, out_dir=args.out, window=args.window):
        print(path)
    return EXIT_OK


# Auxiliar functions


def _sections(args: argparse.Namespace) -> dict[str, dict[str, Any]]:
    if args.config is None:
        return {name: {} for name in SECTIONS}
    return load_config(args.config)


def _seed(args: argparse.Namespace) -> int:
    return 0 if args.seed is None else args.seed


def _overrides(**values: Any) -> dict[str, Any]:
    return {key: value for key, value in values.items() if value is not None}


def _sim_config(args: argparse.Namespace) -> SimConfig:
    values = {
        **_sections(args)["sim"],
        **_overrides(
            node_count=args.nodes,
            sim_duration=args.duration,
            data_interval=args.interval,
            rng_seed=args.seed,
        ),
    }
    return SimConfig.from_mapping(values)


def _pipeline_config(args: argparse.Namespace, **overrides: Any) -> PipelineConfig:
    values = {**_sections(args)["pipeline"], **_overrides(seed=args.seed, **overrides)}
    return PipelineConfig.from_mapping(values)


def _forest_config(args: argparse.Namespace, **overrides: Any) -> ForestConfig:
    values = {**_sections(args)["forest"], **_overrides(seed=args.seed, **overrides)}
    return ForestConfig.from_mapping(values)


def _print_reports(reports: dict) -> None:
    if not reports:
        return
    frame = pd.DataFrame({name: r.row() for name, r in reports.items()}).T
    print(frame.to_string(float_format=lambda v: f"{v:.4f}"))


if __name__ == "__main__":
    sys.exit(main())
