import json
from pathlib import Path

import numpy as np
import pytest

from oplex.cli import main

DATA = Path(__file__).parent / "data"


def write_config(tmp_path, raw):
    path = tmp_path / "config.json"
    path.write_text(json.dumps(raw))
    return path


SMALL_MERGED = {
    "model": {"kind": "merged", "alphas": [0.25, 0.75]},
    "layers": [
        {"kind": "circulant", "n": 5, "offsets": [1, 4], "weight": 0.5},
        {"kind": "circulant", "n": 5, "offsets": [2, 3], "weight": 0.5},
    ],
    "x0": {"kind": "uniform", "seed": 4},
    "t_max": 10000,
    "tol": 1e-12,
    "outputs": ["sweep", "summary"],
}


class TestSimulateCommand:
    def test_successful_run_exits_zero(self, tmp_path, capsys):
        config = write_config(tmp_path, SMALL_MERGED)
        code = main(["simulate", "--config", str(config), "--out", str(tmp_path / "out")])
        assert code == 0
        summary = json.loads(capsys.readouterr().out)
        assert summary["all_passed"] is True
        assert (tmp_path / "out" / "sweep.csv").exists()

    def test_config_error_exits_two(self, tmp_path, capsys):
        bad = dict(SMALL_MERGED, model={"kind": "merged", "alphas": []})
        config = write_config(tmp_path, bad)
        code = main(["simulate", "--config", str(config), "--out", str(tmp_path / "out")])
        assert code == 2
        assert "model.alphas" in capsys.readouterr().err

    def test_missing_config_file_exits_two(self, tmp_path, capsys):
        code = main(
            ["simulate", "--config", str(tmp_path / "nope.json"), "--out", str(tmp_path)]
        )
        assert code == 2


class TestAnalyzeCommand:
    def test_merged_mode(self, capsys):
        code = main(
            [
                "analyze",
                "--layer1", str(DATA / "contact_layer_a.txt"),
                "--layer2", str(DATA / "contact_layer_b.txt"),
                "--mode", "merged",
                "--alpha", "0.5",
                "--n", "8",
                "--x0", "3",
            ]
        )
        assert code == 0
        report = json.loads(capsys.readouterr().out)
        assert report["mode"] == "merged"
        assert report["slem"] >= report["slem_lower_bound"]
        assert report["consensus"] is not None

    def test_switching_mode_with_dump(self, capsys):
        code = main(
            [
                "analyze",
                "--layer1", str(DATA / "contact_layer_a.txt"),
                "--layer2", str(DATA / "contact_layer_b.txt"),
                "--mode", "switching",
                "--k", "3",
                "--n", "8",
                "--x0", "3",
                "--dump",
            ]
        )
        assert code == 0
        report = json.loads(capsys.readouterr().out)
        assert report["status"] == "consensus"
        assert report["slem_cycle"] <= report["rho_star"] + 1e-9
        cycle = np.array(report["cycle"])
        assert cycle.shape == (8, 8)
        assert np.abs(cycle.sum(axis=1) - 1).max() <= 1e-12

    def test_switching_k0_reports_oscillation(self, capsys):
        code = main(
            [
                "analyze",
                "--layer1", str(DATA / "contact_layer_a.txt"),
                "--layer2", str(DATA / "contact_layer_b.txt"),
                "--mode", "switching",
                "--k", "0",
                "--n", "8",
                "--x0", "3",
            ]
        )
        assert code == 0
        report = json.loads(capsys.readouterr().out)
        assert report["status"] == "oscillation"
        assert report["consensus"] is None

    def test_x0_from_file(self, tmp_path, capsys):
        x0_file = tmp_path / "x0.txt"
        x0_file.write_text("\n".join(["0.5"] * 8))
        code = main(
            [
                "analyze",
                "--layer1", str(DATA / "contact_layer_a.txt"),
                "--layer2", str(DATA / "contact_layer_b.txt"),
                "--mode", "merged",
                "--alpha", "0.5",
                "--n", "8",
                "--x0", str(x0_file),
            ]
        )
        assert code == 0
        report = json.loads(capsys.readouterr().out)
        assert report["consensus"] == pytest.approx(0.5)

    def test_missing_mode_parameter_exits_two(self, capsys):
        code = main(
            [
                "analyze",
                "--layer1", str(DATA / "contact_layer_a.txt"),
                "--layer2", str(DATA / "contact_layer_b.txt"),
                "--mode", "merged",
            ]
        )
        assert code == 2

    def test_infers_n_from_files(self, capsys):
        code = main(
            [
                "analyze",
                "--layer1", str(DATA / "contact_layer_a.txt"),
                "--layer2", str(DATA / "contact_layer_b.txt"),
                "--mode", "merged",
                "--alpha", "0.5",
                "--x0", "3",
            ]
        )
        assert code == 0
        assert json.loads(capsys.readouterr().out)["n"] == 8


class TestVerifyCommand:
    def test_examples_suite_passes(self, capsys):
        code = main(["verify", "--suite", "examples"])
        out = capsys.readouterr().out
        assert code == 0
        assert "FAIL" not in out
        assert "checks passed" in out

    def test_perturbation_suite_passes(self, capsys):
        code = main(["verify", "--suite", "perturbation"])
        assert code == 0
        assert "FAIL" not in capsys.readouterr().out
