"""Tests for the command line"""

import json

import pandas as pd
import pytest

from data_io import write_correlations
from state_engine import add_white_noise, make_state, nonvanishing_correlations
from witness_cli import EXIT_DATA, EXIT_DETECTED, EXIT_NOT_DETECTED, EXIT_USAGE, main


@pytest.fixture
def config(tmp_path):
    path = tmp_path / "witness_config.yaml"
    path.write_text("oracle:\n  trials: 50\n  restarts: 1\nsampling:\n  shots: 1000\n  seed: 11\n")
    return str(path)


@pytest.fixture
def ghz_file(tmp_path, config):
    out = tmp_path / "ghz.json"
    code = main(["--config", config, "build", "--state", "ghz", "--n", "4",
                 "--settings", "3333,1221", "--out", str(out)])
    assert code == EXIT_DETECTED
    return out


def test_build(ghz_file):
    payload = json.loads(ghz_file.read_text())
    assert payload["threshold"] == "7/11"
    assert "1221" in payload["operators"]
    assert payload["metadata"]["family"] == "ghz"


def test_eval_published(tmp_path, config, ghz_file, capsys):
    report = tmp_path / "report.json"
    code = main(["--config", config, "eval", "--witness", str(ghz_file),
                 "--published", "ghz4", "--report", str(report)])
    assert code == EXIT_DETECTED
    payload = json.loads(report.read_text())
    assert payload["value"] == pytest.approx(0.91652, abs=5e-5)
    assert payload["verdict"] == "GenuineMultipartite"
    assert "EVALUATION REPORT" in capsys.readouterr().out


def test_eval_not_detected(tmp_path, config, ghz_file):
    rho = add_white_noise(make_state("ghz", 4), 0.7)
    data = write_correlations(nonvanishing_correlations(rho), tmp_path / "noisy.csv")
    code = main(["--config", config, "eval", "--witness", str(ghz_file), "--correlations", str(data)])
    assert code == EXIT_NOT_DETECTED


def test_simulate_then_eval(tmp_path, config, ghz_file):
    counts = tmp_path / "counts.json"
    corr = tmp_path / "estimated.csv"
    code = main(["--config", config, "simulate", "--state", "ghz", "--noise-p", "0.95",
                 "--settings", "3333,1221", "--out", str(counts), "--correlations-out", str(corr)])
    assert code == EXIT_DETECTED
    records = json.loads(counts.read_text())["records"]
    assert [r["shots"] for r in records] == [1000, 1000]
    assert corr.read_text().startswith("# n_qubits: 4\n")
    assert main(["--config", config, "eval", "--witness", str(ghz_file),
                 "--counts", str(counts)]) == EXIT_DETECTED


def test_simulate_is_reproducible(tmp_path, config):
    outputs = []
    for name in ("a.json", "b.json"):
        out = tmp_path / name
        main(["--config", config, "simulate", "--state", "cluster4", "--settings", "1133,3311",
              "--seed", "3", "--noise-p", "0.9", "--out", str(out)])
        outputs.append(out.read_text())
    assert outputs[0] == outputs[1]


def test_sweep(tmp_path, config):
    out = tmp_path / "sweep.csv"
    code = main(["--config", config, "sweep", "--phi", "pi", "--steps", "13",
                 "--noise-p", "1.0", "--out", str(out)])
    assert code == EXIT_DETECTED
    frame = pd.read_csv(out)
    assert len(frame) == 13
    assert list(frame.columns) == ["theta", "phi", "p", "w_ghz", "w_cluster", "fidelity"]
    assert frame["w_ghz"].iloc[0] == pytest.approx(1.0)
    assert frame["w_cluster"].iloc[6] == pytest.approx(1.0)


def test_criteria(config, capsys):
    assert main(["--config", config, "criteria", "--family", "cluster4"]) == EXIT_DETECTED
    out = capsys.readouterr().out
    assert "AC|BD" in out
    assert "threshold 2/3" in out


def test_verify_published(tmp_path, config):
    report = tmp_path / "oracle.json"
    code = main(["--config", config, "verify", "--family", "ghz4", "--samples", "50",
                 "--restarts", "1", "--report", str(report)])
    assert code == EXIT_DETECTED
    suites = {r["suite"] for r in json.loads(report.read_text())}
    assert {"anticommuting_bound", "biseparable_bound", "witness_threshold"} <= suites


def test_usage_errors(config):
    assert main([]) == EXIT_USAGE
    assert main(["--config", config, "build", "--state", "ghz", "--theta", "pie"]) == EXIT_USAGE
    assert main(["--config", config, "simulate", "--state", "ghz", "--settings", "auto",
                 "--out", "x.json"]) == EXIT_USAGE
    assert main(["--config", config, "verify"]) == EXIT_USAGE


def test_data_errors(tmp_path, config, ghz_file):
    assert main(["--config", config, "eval", "--witness", str(tmp_path / "missing.json"),
                 "--published", "ghz4"]) == EXIT_DATA
    bad = tmp_path / "bad.csv"
    bad.write_text("index,value,stderr\n3333,2.0,0.01\n")
    assert main(["--config", config, "eval", "--witness", str(ghz_file),
                 "--correlations", str(bad)]) == EXIT_DATA
    partial = tmp_path / "partial.csv"
    partial.write_text("index,value,stderr\n3333,0.9,0.01\n")
    assert main(["--config", config, "eval", "--witness", str(ghz_file),
                 "--correlations", str(partial)]) == EXIT_DATA


@pytest.mark.parametrize("argv", [
    ["sweep", "--steps", "0"],
    ["simulate", "--state", "ghz", "--settings", "3333", "--shots", "0", "--out", "x.json"],
    ["verify", "--family", "ghz4", "--samples", "0"],
    ["verify", "--family", "ghz4", "--workers", "0"],
])
def test_zero_counts_are_usage_errors(config, argv):
    assert main(["--config", config] + argv) == EXIT_USAGE


def test_eval_merges_correlations_and_counts(tmp_path, config, ghz_file):
    counts = tmp_path / "counts.json"
    main(["--config", config, "simulate", "--state", "ghz", "--noise-p", "0.95",
          "--settings", "1221", "--out", str(counts)])
    z_only = tmp_path / "z.csv"
    z_only.write_text("index,value,stderr\n0033,0.9,0.01\n0303,0.9,0.01\n0330,0.9,0.01\n"
                      "3003,0.9,0.01\n3030,0.9,0.01\n3300,0.9,0.01\n3333,0.9,0.01\n")
    report = tmp_path / "report.json"
    code = main(["--config", config, "eval", "--witness", str(ghz_file),
                 "--correlations", str(z_only), "--counts", str(counts), "--report", str(report)])
    assert code == EXIT_DETECTED
    assert json.loads(report.read_text())["value"] > 7 / 11
    # neither source alone covers every witness operator
    assert main(["--config", config, "eval", "--witness", str(ghz_file),
                 "--counts", str(counts)]) == EXIT_DATA


def test_eval_source_rules(tmp_path, config, ghz_file):
    data = write_correlations(nonvanishing_correlations(make_state("ghz", 4)), tmp_path / "ideal.csv")
    assert main(["--config", config, "eval", "--witness", str(ghz_file),
                 "--published", "ghz4", "--correlations", str(data)]) == EXIT_USAGE
    assert main(["--config", config, "eval", "--witness", str(ghz_file)]) == EXIT_USAGE


def test_verify_report_in_new_directory(tmp_path, config):
    report = tmp_path / "reports" / "oracle" / "cluster.json"
    code = main(["--config", config, "verify", "--family", "cluster4", "--samples", "30",
                 "--restarts", "1", "--report", str(report)])
    assert code == EXIT_DETECTED
    payload = json.loads(report.read_text())
    assert payload[0]["suite"] == "anticommuting_bound"
    assert payload[0]["applicable"] is False
