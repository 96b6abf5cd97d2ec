import json
import logging
import pandas as pd
import pytest

from src.interfaces.cli import main, create_parser
from src.error_handling.handlers import EXIT_OK, EXIT_INPUT_ERROR
from src.error_handling.logger import ROOT_NAME


@pytest.fixture
def solver_config(tmp_path):
    path = tmp_path / "solver.json"
    path.write_text(json.dumps({"max_iters": 15}))
    return path


def run(*argv):
    return main([str(a) for a in argv])


def test_pipeline(tmp_path, solver_config):
    clean, biased, fitted = tmp_path / "clean", tmp_path / "biased", tmp_path / "fit"
    assert run("synth", "--d", 4, "--m", 3, "--n", 20, "--rank", 2, "--seed", 1, "--out", clean) == EXIT_OK
    assert run("bias", "--in", clean, "--c", 0.2, "--seed", 7, "--out", biased) == EXIT_OK
    assert (biased / "truth.csv").read_bytes() != (biased / "distributions.csv").read_bytes()
    assert run("degrade", "--in", biased, "--t", 0.7, "--out", biased) == EXIT_OK
    assert (biased / "labels.csv").exists()

    code = run("fit", "--in", biased, "--config", solver_config, "--variant", "bldl",
               "--out", fitted, "--predict-on", clean)
    assert code == EXIT_OK
    for name in ("W.csv", "O.csv", "recovered.csv", "trace.csv", "predictions.csv"):
        assert (fitted / name).exists()
    trace = pd.read_csv(fitted / "trace.csv")
    assert len(trace) <= 15
    assert trace["recovery_error"].notna().all()

    report = tmp_path / "report.json"
    code = run("eval", "--pred", fitted / "predictions.csv", "--truth", clean / "distributions.csv",
               "--out", report)
    assert code == EXIT_OK
    data = json.loads(report.read_text())
    assert data["n_instances"] == 20
    assert set(data["metrics"]) == {"Chebyshev", "Clark", "Canberra", "KL", "Cosine", "Intersection"}


def test_experiments_and_stats(tmp_path):
    for seed in (1, 2):
        spec = {
            "name": f"synth{seed}",
            "dataset": {"synthetic": {"d": 4, "m": 3, "n": 12, "rank": 2, "seed": seed}},
            "solver": {"max_iters": 10},
            "variants": ["bldl", "bldl-a"],
            "folds": 2,
            "output_dir": "results",
        }
        path = tmp_path / f"spec{seed}.json"
        path.write_text(json.dumps(spec))
        assert run("experiment", "--spec", path) == EXIT_OK

    out = tmp_path / "stats.json"
    code = run("stats", "--reports", tmp_path / "results" / "*" / "report.json",
               "--control", "bldl", "--out", out)
    assert code == EXIT_OK
    assert len(json.loads(out.read_text())["records"]) == 6


def test_sensitivity_command(tmp_path):
    spec = {
        "name": "sens",
        "dataset": {"synthetic": {"d": 3, "m": 3, "n": 8, "rank": 1, "seed": 4}},
        "solver": {"max_iters": 5},
        "variants": ["bldl"],
        "folds": 2,
        "output_dir": "results",
    }
    path = tmp_path / "spec.json"
    path.write_text(json.dumps(spec))
    assert run("sensitivity", "--spec", path, "--param", "beta", "--grid", "0.1,0.01") == EXIT_OK
    assert len(pd.read_csv(tmp_path / "results" / "sens" / "sensitivity_beta.csv")) == 2


def test_invalid_rank_is_input_error(tmp_path):
    code = run("synth", "--d", 2, "--m", 3, "--n", 5, "--rank", 3, "--out", tmp_path / "x")
    assert code == EXIT_INPUT_ERROR


def test_missing_dataset_is_input_error(tmp_path):
    assert run("fit", "--in", tmp_path / "missing", "--out", tmp_path / "out") == EXIT_INPUT_ERROR


def test_bad_bias_level(tmp_path, dataset_dir):
    assert run("bias", "--in", dataset_dir, "--c", 1.5, "--out", tmp_path / "b") == EXIT_INPUT_ERROR


def test_no_command_prints_help(capsys):
    assert main([]) == EXIT_INPUT_ERROR
    assert "usage" in capsys.readouterr().out


def test_parser_maps_in_flag():
    args = create_parser().parse_args(["degrade", "--in", "a", "--out", "b"])
    assert args.input == "a" and args.t == 0.7


def test_log_level_option(tmp_path):
    root = logging.getLogger(ROOT_NAME)
    level = root.level
    try:
        assert run("--log-level", "chatty", "synth", "--d", 3, "--m", 3, "--n", 5, "--rank", 1,
                   "--out", tmp_path / "x") == EXIT_INPUT_ERROR
        assert run("--log-level", "warning", "synth", "--d", 3, "--m", 3, "--n", 5, "--rank", 1,
                   "--out", tmp_path / "y") == EXIT_OK
        assert root.level == logging.WARNING
    finally:
        root.setLevel(level)
