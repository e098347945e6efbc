# 2026/09/22
"""
report.py - Reports from run directories.

Defines function 'emit_report', which reads the artifacts found in a run
directory and writes a markdown summary, an Excel workbook and data files
for external plotting:
- 'timeseries.csv': detection rates per window of the verdict log, with the
drift events that fell in each window;
- 'sweep_grid.csv': forest TPR by tree count (rows) and per-tree detector
(columns).

Recognized inputs are the pipeline outputs ('metrics.json',
'verdicts.jsonl', 'drift_events.jsonl') and the experiment outputs
('benchmark.json', 'sweep.csv', 'drift_comparison.csv',
'drift_resilience.csv'). Reports are rebuilt from scratch on every call:
emitting twice gives the same text files.

"""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Any

import numpy as np
import pandas as pd

from uwids import etl
from uwids.errors import ConfigurationError
from uwids.experiments import ARTIFACTS
from uwids.metrics import METRIC_NAMES, MetricsReport
from uwids.pipeline import OUTPUT_FILES

logger = logging.getLogger(__name__)

REPORT_FILES = {
    "markdown": "report.md",
    "excel": "report.xlsx",
    "timeseries": "timeseries.csv",
    "sweep_grid": "sweep_grid.csv",
}
TIMESERIES_WINDOW = 1000
FLOAT_FORMAT = "{:.4f}"


def emit_report(
    run_dir: str | Path,
    *,
    out_dir: str | Path | None = None,
    window: int = TIMESERIES_WINDOW,
) -> list[Path]:
    """Writes the report of `run_dir` into `out_dir` (`run_dir` itself by
    default) and returns the paths written.

    Raises FileNotFoundError when `run_dir` holds none of the recognized
    inputs.

    """
    run_dir = Path(run_dir)
    out_dir = Path(out_dir) if out_dir is not None else run_dir
    if window < 1:
        raise ConfigurationError(f"Window must be positive, not '{window}'.")
    verdicts_name, metrics_name, events_name, _ = OUTPUT_FILES

    run = _read_json(run_dir / metrics_name)
    benchmark = _read_json(run_dir / ARTIFACTS["benchmark"])
    verdicts = _read_jsonl(run_dir / verdicts_name)
    events = _read_jsonl(run_dir / events_name)
    sweep = _read_csv(run_dir / ARTIFACTS["sweep"])
    comparison = _read_csv(run_dir / ARTIFACTS["drift_comparison"])
    resilience = _read_csv(run_dir / ARTIFACTS["drift_resilience"])
    if all(
        item is None for item in (run, benchmark, verdicts, sweep, comparison, resilience)
    ):
        raise FileNotFoundError(f"No run artifacts found in '{run_dir}'.")

    models = _reports(run) | {f"{k} (benchmark)": v for k, v in _reports(benchmark).items()}
    written = []
    sections = ["# Run report", f"Source: `{run_dir.name}`"]

    if models:
        sections += ["## Detection metrics", _markdown(_metrics_frame(models))]
    if run is not None:
        sections += ["## Counters", _markdown(_counters_frame(run, events))]

    if verdicts:
        series = timeseries(verdicts, events or [], window)
        written.append(_write_csv(series, out_dir / REPORT_FILES["timeseries"]))
        sections += [
            "## Time series",
            f"{len(series)} windows of {window} verdicts in "
            f"`{REPORT_FILES['timeseries']}`.",
        ]

    if sweep is not None:
        grid = sweep_grid(sweep)
        written.append(_write_csv(grid, out_dir / REPORT_FILES["sweep_grid"], index=True))
        sections += ["## Parameter sweep (forest TPR)", _markdown(grid.reset_index())]

    if comparison is not None:
        summary = (
            comparison.groupby(["kind", "detector"], sort=True)
            .agg(
                found=("found", "sum"),
                changes=("changes", "sum"),
                false_alarms=("false_alarms", "mean"),
                delay=("delay", "mean"),
            )
            .reset_index()
        )
        sections += ["## Drift detector comparison", _markdown(summary)]

    if resilience is not None:
        sections += [
            "## Drift resilience",
            f"Adaptive forest ahead of the frozen one in "
            f"{int(resilience['adaptive_wins'].sum())} of {len(resilience)} runs "
            f"(mean accuracy {FLOAT_FORMAT.format(resilience['adaptive'].mean())} "
            f"vs {FLOAT_FORMAT.format(resilience['frozen'].mean())}).",
        ]

    if models or sweep is not None:
        excel_path = out_dir / REPORT_FILES["excel"]
        written.append(etl.excel.write(excel_path, models, sweep=sweep, overwrite=True))

    markdown = "\n\n".join(sections) + "\n"
    target = etl.process_path(out_dir / REPORT_FILES["markdown"], overwrite=True)
    with open(target, "w", encoding="utf-8", newline="\n") as f:
        f.write(markdown)
    written.insert(0, target)
    logger.info("Report written to %s", out_dir)
    return written


def timeseries(
    verdicts: list[dict[str, Any]], events: list[dict[str, Any]], window: int
) -> pd.DataFrame:
    """Detection rates per block of `window` consecutive verdicts.

    Rows without a 'truth' only count towards 'n' and 'attacks'; a rate
    with nothing to count is 1 (its complement 0).

    """
    frame = pd.DataFrame(verdicts)
    frame["block"] = np.arange(len(frame)) // window
    frame["flagged"] = frame["label"] == "attack"
    truth = frame.get("truth", pd.Series([None] * len(frame)))
    labelled = truth.notna()
    positive = labelled & (truth.fillna(0).astype(int) != 0)
    negative = labelled & ~positive
    frame["tp"] = positive & frame["flagged"]
    frame["fn"] = positive & ~frame["flagged"]
    frame["tn"] = negative & ~frame["flagged"]
    frame["fp"] = negative & frame["flagged"]

    series = frame.groupby("block").agg(
        start=("index", "min"),
        end=("index", "max"),
        n=("index", "size"),
        attacks=("flagged", "sum"),
        tp=("tp", "sum"),
        fn=("fn", "sum"),
        tn=("tn", "sum"),
        fp=("fp", "sum"),
    )
    labelled_rows = series[["tp", "fn", "tn", "fp"]].sum(axis=1)
    series["accuracy"] = _ratio(series["tp"] + series["tn"], labelled_rows)
    series["tpr"] = _ratio(series["tp"], series["tp"] + series["fn"])
    series["fpr"] = 1.0 - _ratio(series["tn"], series["tn"] + series["fp"])
    event_index = pd.Series([e["index"] for e in events], dtype=float)
    series["drift_events"] = [
        int(((event_index >= s) & (event_index <= e)).sum())
        for s, e in zip(series["start"], series["end"])
    ]
    columns = ["start", "end", "n", "attacks", "accuracy", "tpr", "fpr", "drift_events"]
    return series[columns].reset_index(drop=True)


def sweep_grid(sweep: pd.DataFrame, value: str = "tpr") -> pd.DataFrame:
    """Pivots sweep rows into a tree count x detector grid of `value`."""
    return sweep.pivot(index="n_trees", columns="detector", values=value).sort_index()


# Auxiliar functions


def _ratio(hits: pd.Series, total: pd.Series) -> pd.Series:
    return pd.Series(
        np.where(total > 0, hits / total.where(total > 0, 1), 1.0), index=hits.index
    )


def _reports(payload: dict[str, Any] | None) -> dict[str, MetricsReport]:
    if not payload:
        return {}
    return {name: MetricsReport.from_dict(d) for name, d in payload.get("models", {}).items()}


def _metrics_frame(models: dict[str, MetricsReport]) -> pd.DataFrame:
    rows = [{"model": name, **report.row(), "n": report.n} for name, report in models.items()]
    return pd.DataFrame(rows, columns=["model", *METRIC_NAMES, "n"])


def _counters_frame(run: dict[str, Any], events: list[dict[str, Any]] | None) -> pd.DataFrame:
    counters = {
        **run.get("counters", {}),
        "errors": len(run.get("errors", [])),
        "forest_warnings": run.get("forest", {}).get("warnings", 0),
        "forest_drifts": run.get("forest", {}).get("drifts", 0),
        "drift_events": len(events or []),
    }
    return pd.DataFrame([{"counter": k, "value": v} for k, v in counters.items()])


def _markdown(frame: pd.DataFrame) -> str:
    header = [str(c) for c in frame.columns]
    lines = [
        "| " + " | ".join(header) + " |",
        "|" + "|".join("---" for _ in header) + "|",
    ]
    for row in frame.itertuples(index=False):
        lines.append("| " + " | ".join(_format(v) for v in row) + " |")
    return "\n".join(lines)


def _format(value: Any) -> str:
    if value is None or (isinstance(value, float) and np.isnan(value)):
        return "-"
    if isinstance(value, (float, np.floating)):
        return FLOAT_FORMAT.format(value)
    return str(value)


def _read_json(path: Path) -> dict[str, Any] | None:
    if not path.exists():
        return None
    with open(path, encoding="utf-8") as f:
        return json.load(f)


def _read_jsonl(path: Path) -> list[dict[str, Any]] | None:
    return etl.read_jsonl(path) if path.exists() else None


def _read_csv(path: Path) -> pd.DataFrame | None:
    return pd.read_csv(path) if path.exists() else None


def _write_csv(frame: pd.DataFrame, path: Path, *, index: bool = False) -> Path:
    target = etl.process_path(path, overwrite=True)
    frame.to_csv(target, index=index, lineterminator="\n", float_format="%.6f")
    return target
