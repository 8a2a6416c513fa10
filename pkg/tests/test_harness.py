import json
from pathlib import Path

import numpy as np
import pytest

from oplex.harness import (
    ConfigError,
    config_hash,
    parse_config,
    resolve_x0,
    run_experiment,
)

DATA = Path(__file__).parent / "data"


def merged_config(**overrides):
    raw = {
        "model": {"kind": "merged", "alphas": [0.0, 0.5, 1.0]},
        "layers": [
            {"kind": "circulant", "n": 5, "offsets": [1, 4], "weight": 0.5},
            {"kind": "circulant", "n": 5, "offsets": [2, 3], "weight": 0.5},
        ],
        "x0": {"kind": "uniform", "seed": 1},
        "t_max": 10000,
        "tol": 1e-12,
        "outputs": ["sweep", "trajectories", "summary"],
    }
    raw.update(overrides)
    return raw


def dataset_config(model):
    return {
        "model": model,
        "layers": {
            "kind": "two-layer-dataset",
            "path_a": str(DATA / "contact_layer_a.txt"),
            "path_b": str(DATA / "contact_layer_b.txt"),
            "n": 8,
            "indexing": "0-based",
        },
        "x0": {"kind": "uniform", "seed": 5},
        "t_max": 5000,
        "tol": 1e-12,
        "outputs": ["sweep", "summary"],
    }


class TestConfigValidation:
    def test_valid_config_parses(self):
        config = parse_config(merged_config())
        assert config.model_kind == "merged"
        assert config.alphas == (0.0, 0.5, 1.0)

    def test_missing_model_reports_path(self):
        with pytest.raises(ConfigError, match="^model:"):
            parse_config({"layers": [], "x0": {}})

    def test_bad_alpha_reports_indexed_path(self):
        raw = merged_config(model={"kind": "merged", "alphas": [0.5, 3.0]})
        with pytest.raises(ConfigError, match=r"model\.alphas\[1\]"):
            parse_config(raw)

    def test_empty_grid_rejected(self):
        raw = merged_config(model={"kind": "switching", "ks": []})
        with pytest.raises(ConfigError, match=r"model\.ks"):
            parse_config(raw)

    def test_bad_generator_reports_layer_index(self):
        raw = merged_config(
            layers=[
                {"kind": "erdos-renyi", "n": 5, "p": 2.0},
                {"kind": "circulant", "n": 5, "offsets": [1], "weight": 1.0},
            ]
        )
        with pytest.raises(ConfigError, match=r"layers\[0\]"):
            parse_config(raw)

    def test_bad_tol_rejected(self):
        with pytest.raises(ConfigError, match="tol"):
            parse_config(merged_config(tol=0.0))

    def test_bad_t_max_rejected(self):
        with pytest.raises(ConfigError, match="t_max"):
            parse_config(merged_config(t_max=0))

    def test_unknown_output_kind_rejected(self):
        with pytest.raises(ConfigError, match=r"outputs\[0\]"):
            parse_config(merged_config(outputs=["plots"]))

    def test_unknown_x0_kind_rejected(self):
        with pytest.raises(ConfigError, match=r"x0\.kind"):
            parse_config(merged_config(x0={"kind": "gaussian", "seed": 1}))

    def test_single_model_needs_one_layer(self):
        raw = merged_config(model={"kind": "single"})
        with pytest.raises(ConfigError, match="exactly 1"):
            parse_config(raw)


class TestX0Resolution:
    def test_uniform_deterministic(self):
        config = parse_config(merged_config())
        assert np.array_equal(resolve_x0(config, 5), resolve_x0(config, 5))

    def test_explicit_values(self):
        raw = merged_config(x0={"kind": "explicit", "values": [0.1, 0.2, 0.3, 0.4, 0.5]})
        x0 = resolve_x0(parse_config(raw), 5)
        assert np.array_equal(x0, [0.1, 0.2, 0.3, 0.4, 0.5])

    def test_explicit_wrong_length(self):
        raw = merged_config(x0={"kind": "explicit", "values": [0.1, 0.2]})
        with pytest.raises(ConfigError, match="length"):
            resolve_x0(parse_config(raw), 5)

    def test_overrides_applied(self):
        raw = merged_config(
            x0={"kind": "uniform-with-overrides", "seed": 1, "nodes": [0, 2], "value": 0.0}
        )
        x0 = resolve_x0(parse_config(raw), 5)
        assert x0[0] == 0.0 and x0[2] == 0.0
        assert (x0[[1, 3, 4]] > 0).all()


class TestRunExperiment:
    def test_merged_sweep_passes_and_writes_reports(self, tmp_path):
        result = run_experiment(merged_config(), tmp_path)
        assert result.all_passed
        assert (tmp_path / "sweep.csv").exists()
        assert (tmp_path / "summary.json").exists()
        assert (tmp_path / "trajectory_alpha_0.5.csv").exists()
        rows = (tmp_path / "sweep.csv").read_text().splitlines()
        assert len(rows) == 4  # header + three grid points
        summary = json.loads((tmp_path / "summary.json").read_text())
        assert summary["all_passed"] is True
        assert summary["config_hash"] == config_hash(merged_config())

    def test_interval_endpoints_constant_across_alphas(self, tmp_path):
        result = run_experiment(merged_config(), tmp_path)
        los = {row["interval_lo"] for row in result.rows}
        assert len(los) == 1

    def test_dataset_merged_endpoint_not_primitive(self, tmp_path):
        config = dataset_config({"kind": "merged", "alphas": [0.0, 0.5, 1.0]})
        result = run_experiment(config, tmp_path)
        by_alpha = {row["grid_value"]: row for row in result.rows}
        assert by_alpha[0.0]["note"] == "merged transition not primitive"
        assert by_alpha[0.0]["consensus"] is None
        assert by_alpha[0.5]["converged"]
        assert by_alpha[1.0]["converged"]
        # a failed grid point is recorded, not fatal, and arms no assertion
        assert result.all_passed

    def test_dataset_switching_consensus_for_positive_k(self, tmp_path):
        config = dataset_config({"kind": "switching", "ks": [0, 3, 5]})
        result = run_experiment(config, tmp_path)
        by_k = {row["grid_value"]: row for row in result.rows}
        assert not by_k[0]["converged"]  # bipartite contact layer oscillates
        assert by_k[3]["converged"] and by_k[5]["converged"]
        assert result.all_passed

    def test_single_layer_model(self, tmp_path):
        raw = {
            "model": {"kind": "single"},
            "layers": [{"kind": "k-regular", "n": 20, "k": 4, "seed": 2}],
            "x0": {"kind": "uniform", "seed": 9},
            "t_max": 10000,
            "tol": 1e-12,
            "outputs": ["sweep", "summary"],
        }
        result = run_experiment(raw, tmp_path)
        assert result.all_passed
        row = result.rows[0]
        assert row["grid_kind"] == "single"
        assert row["consensus"] is not None

    def test_outputs_can_be_restricted(self, tmp_path):
        config = merged_config(outputs=["summary"])
        run_experiment(config, tmp_path)
        assert not (tmp_path / "sweep.csv").exists()
        assert (tmp_path / "summary.json").exists()

    def test_byte_identical_reruns(self, tmp_path):
        out1 = tmp_path / "run1"
        out2 = tmp_path / "run2"
        run_experiment(merged_config(), out1)
        run_experiment(merged_config(), out2)
        for name in sorted(p.name for p in out1.iterdir()):
            assert (out1 / name).read_bytes() == (out2 / name).read_bytes()

    def test_record_opinions_adds_state_columns(self, tmp_path):
        config = merged_config(record_opinions=True)
        run_experiment(config, tmp_path)
        header = (tmp_path / "trajectory_alpha_0.5.csv").read_text().splitlines()[0]
        assert "x_0" in header and "x_4" in header


class TestConfigHash:
    def test_key_order_does_not_matter(self):
        a = {"b": 1, "a": {"y": 2, "x": 3}}
        b = {"a": {"x": 3, "y": 2}, "b": 1}
        assert config_hash(a) == config_hash(b)

    def test_different_configs_differ(self):
        assert config_hash(merged_config()) != config_hash(merged_config(t_max=9999))
