# 2026/09/30
"""
test_62_cli.py - Tests for the command line and its configuration files
"""

import json

import pandas as pd
import pytest
import yaml

from uwids import etl
from uwids.cli import main
from uwids.config import dump_config, load_config
from uwids.errors import ConfigurationError
from uwids.pipeline import MODEL_FILES, OUTPUT_FILES

SMALL = {
    "pipeline": {
        "nu": 0.1,
        "ensemble_size": 3,
        "gate_train_cap": 200,
        "kdq_window": 50,
        "kdq_stride": 25,
        "kdq_bootstrap": 50,
    },
    "forest": {"n_trees": 3},
}


@pytest.fixture
def dataset_path(tmp_path, labelled_dataset):
    return labelled_dataset.write(tmp_path / "data" / "dataset.csv")


@pytest.fixture
def config_path(tmp_path):
    return dump_config(tmp_path / "uwids.yaml", SMALL)


# Configuration files


def test_load_config_sections(config_path):
    sections = load_config(config_path)
    assert set(sections) == {"sim", "pipeline", "forest"}
    assert sections["sim"] == {}
    assert sections["forest"] == {"n_trees": 3}


def test_load_config_flat(tmp_path):
    path = tmp_path / "flat.yaml"
    path.write_text(yaml.safe_dump({"node_count": 16}), encoding="utf-8")
    assert load_config(path)["sim"] == {"node_count": 16}

    path.write_text("", encoding="utf-8")
    assert load_config(path) == {"sim": {}, "pipeline": {}, "forest": {}}


@pytest.mark.parametrize(
    "content",
    ["- 1\n- 2\n", "pipeline: {nu: 0.1}\nextra: {}\n", "pipeline: 3\n", "a: [1,\n"],
)
def test_load_config_errors(tmp_path, content):
    path = tmp_path / "bad.yaml"
    path.write_text(content, encoding="utf-8")
    with pytest.raises(ConfigurationError):
        load_config(path)
    with pytest.raises(FileNotFoundError):
        load_config(tmp_path / "missing.yaml")


# Command line


def test_usage_errors():
    assert main([]) == 1
    assert main(["--bogus"]) == 1
    assert main(["--help"]) == 0


def test_ips_demo(capsys):
    assert main(["--seed", "2", "ips-demo", "--scenario", "honest", "replay"]) == 0
    out = capsys.readouterr().out
    assert "honest" in out and "replay" in out
    assert "PASS" in out


def test_synth_stream(tmp_path):
    args = ["--out", str(tmp_path), "--seed", "1"]
    command = ["synth-stream", "--kind", "abrupt", "--length", "500", "--detector", "adwin"]
    assert main(args + command) == 0
    assert (tmp_path / "synth_abrupt.csv").exists()
    payload = json.loads((tmp_path / "synth_abrupt.json").read_text(encoding="utf-8"))
    assert payload["change_points"] == [250]

    assert main(args + command) == 2
    assert main([*args, "--overwrite", *command]) == 0


def test_drift_scan(tmp_path, dataset_path):
    out = ["--out", str(tmp_path)]
    assert main([*out, "drift-scan"]) == 2

    scan = ["drift-scan", "--dataset", str(dataset_path)]
    assert main([*out, *scan, "--detector", "page_hinkley", "--column", "Energy"]) == 0
    assert (tmp_path / "drift_events.jsonl").exists()
    assert main([*out, *scan, "--detector", "adwin", "--column", "Nope"]) == 2

    kdq = [*out, "--overwrite", *scan, "--window", "100", "--stride", "50"]
    assert main(kdq) == 0


def test_run_pipeline_and_report(tmp_path, dataset_path, config_path):
    run_dir, detect_dir = tmp_path / "run", tmp_path / "detect"
    common = ["--config", str(config_path), "--seed", "1"]

    args = [*common, "--out", str(run_dir), "run-pipeline", "--dataset", str(dataset_path)]
    assert main(args) == 0
    for name in (*OUTPUT_FILES, *MODEL_FILES):
        assert (run_dir / name).exists()

    detect = [
        *common,
        "--out",
        str(detect_dir),
        "run-pipeline",
        "--dataset",
        str(dataset_path),
        "--mode",
        "detect",
        "--models",
        str(run_dir),
    ]
    assert main(detect) == 0
    assert len(etl.read_jsonl(detect_dir / "verdicts.jsonl")) == 600

    assert main(["--out", str(run_dir), "report", "--window", "50"]) == 0
    assert (run_dir / "report.md").exists()


def test_options_after_command(tmp_path, dataset_path, config_path):
    run_dir = tmp_path / "run"
    args = ["run-pipeline", "--dataset", str(dataset_path), "--mode", "train-eval"]
    options = ["--config", str(config_path), "--seed", "1", "--out", str(run_dir)]
    assert main([*args, *options]) == 0
    for name in OUTPUT_FILES:
        assert (run_dir / name).exists()

    # A leading option still applies when the command does not repeat it
    assert main(["--out", str(tmp_path), "synth-stream", "--length", "300"]) == 0
    assert (tmp_path / "synth_abrupt.csv").exists()
    assert main(["synth-stream", "--length", "300", "--out", str(tmp_path), "--seed", "4"]) == 2


def test_data_errors(tmp_path, dataset_path):
    missing = ["--out", str(tmp_path), "run-pipeline", "--dataset", str(tmp_path / "none.csv")]
    assert main(missing) == 2

    bad = dump_config(tmp_path / "bad.yaml", {"pipeline": {"trees": 3}})
    args = ["--config", str(bad), "--out", str(tmp_path), "run-pipeline"]
    assert main([*args, "--dataset", str(dataset_path)]) == 2


def test_sim_and_featurize(tmp_path):
    out = ["--seed", "3", "--out", str(tmp_path)]
    sim = ["sim", "--nodes", "16", "--duration", "60", "--interval", "0.5"]
    assert main([*out, *sim]) == 0
    assert (tmp_path / "scenarios.json").exists()
    assert len(list(tmp_path.glob("trace_*.csv"))) == 4

    assert main([*out, "featurize"]) == 0
    assert (tmp_path / "dataset.csv").exists()
    assert (tmp_path / "dataset.encoding.json").exists()
    assert main([*out, "featurize"]) == 2


def test_training_commands(tmp_path, dataset_path, config_path):
    args = ["--config", str(config_path), "--out", str(tmp_path)]
    dataset = ["--dataset", str(dataset_path)]
    assert main([*args, "train-anomaly", *dataset]) == 0
    assert (tmp_path / MODEL_FILES[0]).exists() and (tmp_path / MODEL_FILES[1]).exists()

    assert main([*args, "train-forest", *dataset, "--trees", "3", "--detector", "ddm"]) == 0
    assert (tmp_path / "prequential.csv").exists()
    assert (tmp_path / MODEL_FILES[2]).exists()

    sweep = ["sweep", *dataset, "--trees", "2", "3", "--detectors", "adwin", "ddm"]
    assert main([*args, *sweep]) == 0
    assert len(pd.read_csv(tmp_path / "sweep.csv")) == 4
