"""Config-driven experiment runner: sweeps, CSV reports, JSON summary.

A config declares the model (single layer, merged over an alpha grid, or
switching over a k grid), how to obtain the two layers (generators or a
two-layer dataset), the initial opinions, and stopping parameters. Each
grid point gets the relevant spectral bounds, the predicted consensus, a
simulated trajectory, and a set of armed theory assertions; grid points
where a required matrix is not primitive are recorded and skipped, not
fatal. All output is deterministic for a fixed config (17-significant-digit
floats, no timestamps), so reruns are byte-identical.
"""

from __future__ import annotations

import csv
import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from .merged import consensus_interval, merge, merged_consensus, slem_bounds
from .netcore import GeneratorSpec, LayerGraph, generate, load_two_layer_dataset
from .simlab import constant_schedule, decay_check, fit_rate, simulate
from .spectral import slem_reversible
from .stochastic import (
    NotPrimitiveError,
    consensus_value,
    is_primitive,
    stationary_from_degrees,
    stationary_general,
    transition_matrix,
)
from .switching import analyze, schedule_matrix, switching_model

SWEEP_COLUMNS = [
    "grid_kind",
    "grid_value",
    "slem",
    "bound_lower",
    "bound_upper",
    "bound_armed",
    "consensus",
    "interval_lo",
    "interval_hi",
    "empirical_rate",
    "converged",
    "assertions_pass",
    "note",
]

_RATE_SLACK = 1e-6
_INTERVAL_SLACK = 1e-10
_SLEM_SLACK = 1e-9
_AGREEMENT_TOL = 1e-7
_FIT_FLOOR = 1e-13


class ConfigError(ValueError):
    """Invalid experiment config; message carries the offending field path."""


@dataclass(frozen=True)
class XZeroSpec:
    kind: str  # uniform | explicit | uniform-with-overrides
    seed: int | None = None
    values: tuple[float, ...] | None = None
    nodes: tuple[int, ...] | None = None
    value: float | None = None


@dataclass(frozen=True)
class DatasetSpec:
    path_a: str
    path_b: str
    n: int
    indexing: str = "0-based"


@dataclass(frozen=True)
class ExperimentConfig:
    model_kind: str  # single | merged | switching
    alphas: tuple[float, ...] | None
    ks: tuple[int, ...] | None
    layer_specs: tuple[GeneratorSpec, ...] | None
    dataset: DatasetSpec | None
    x0: XZeroSpec
    t_max: int
    tol: float
    outputs: tuple[str, ...]
    record_opinions: bool
    raw: dict = field(compare=False)


def _fail(path: str, message: str) -> None:
    raise ConfigError(f"{path}: {message}")


def parse_config(raw: dict) -> ExperimentConfig:
    if not isinstance(raw, dict):
        _fail("<root>", "config must be a JSON object")
    model = raw.get("model")
    if not isinstance(model, dict) or "kind" not in model:
        _fail("model", "must be an object with a 'kind' field")
    kind = model["kind"]
    alphas = ks = None
    if kind == "merged":
        grid = model.get("alphas")
        if not isinstance(grid, list) or not grid:
            _fail("model.alphas", "must be a nonempty list")
        for i, a in enumerate(grid):
            if not isinstance(a, (int, float)) or not (0 <= a <= 1):
                _fail(f"model.alphas[{i}]", "must be a number in [0, 1]")
        alphas = tuple(float(a) for a in grid)
    elif kind == "switching":
        grid = model.get("ks")
        if not isinstance(grid, list) or not grid:
            _fail("model.ks", "must be a nonempty list")
        for i, k in enumerate(grid):
            if not isinstance(k, int) or k < 0:
                _fail(f"model.ks[{i}]", "must be an integer >= 0")
        ks = tuple(int(k) for k in grid)
    elif kind != "single":
        _fail("model.kind", f"unknown model kind {kind!r}")

    layers = raw.get("layers")
    layer_specs = dataset = None
    if isinstance(layers, list):
        expected = 1 if kind == "single" else 2
        if len(layers) != expected:
            _fail("layers", f"{kind} model needs exactly {expected} layer spec(s)")
        specs = []
        for i, entry in enumerate(layers):
            try:
                specs.append(GeneratorSpec.from_dict(entry))
            except (TypeError, ValueError) as exc:
                _fail(f"layers[{i}]", str(exc))
        layer_specs = tuple(specs)
    elif isinstance(layers, dict) and layers.get("kind") == "two-layer-dataset":
        if kind == "single":
            _fail("layers", "dataset input provides two layers; model is single")
        for need in ("path_a", "path_b", "n"):
            if need not in layers:
                _fail(f"layers.{need}", "required for two-layer-dataset")
        indexing = layers.get("indexing", "0-based")
        if indexing not in ("0-based", "1-based"):
            _fail("layers.indexing", "must be '0-based' or '1-based'")
        dataset = DatasetSpec(
            path_a=str(layers["path_a"]),
            path_b=str(layers["path_b"]),
            n=int(layers["n"]),
            indexing=indexing,
        )
    else:
        _fail("layers", "must be a list of generator specs or a two-layer-dataset object")

    x0_raw = raw.get("x0")
    if not isinstance(x0_raw, dict) or "kind" not in x0_raw:
        _fail("x0", "must be an object with a 'kind' field")
    x0_kind = x0_raw["kind"]
    if x0_kind == "uniform":
        if not isinstance(x0_raw.get("seed"), int):
            _fail("x0.seed", "uniform initial opinions require an integer seed")
        x0 = XZeroSpec(kind="uniform", seed=int(x0_raw["seed"]))
    elif x0_kind == "explicit":
        values = x0_raw.get("values")
        if not isinstance(values, list) or not values:
            _fail("x0.values", "must be a nonempty list")
        x0 = XZeroSpec(kind="explicit", values=tuple(float(v) for v in values))
    elif x0_kind == "uniform-with-overrides":
        if not isinstance(x0_raw.get("seed"), int):
            _fail("x0.seed", "uniform initial opinions require an integer seed")
        nodes = x0_raw.get("nodes")
        if not isinstance(nodes, list) or not all(isinstance(v, int) for v in nodes):
            _fail("x0.nodes", "must be a list of node indices")
        if not isinstance(x0_raw.get("value"), (int, float)):
            _fail("x0.value", "override value must be a number")
        x0 = XZeroSpec(
            kind="uniform-with-overrides",
            seed=int(x0_raw["seed"]),
            nodes=tuple(int(v) for v in nodes),
            value=float(x0_raw["value"]),
        )
    else:
        _fail("x0.kind", f"unknown initial-opinion kind {x0_kind!r}")

    t_max = raw.get("t_max", 10**6)
    if not isinstance(t_max, int) or t_max < 1:
        _fail("t_max", "must be an integer >= 1")
    tol = raw.get("tol", 1e-12)
    if not isinstance(tol, (int, float)) or tol <= 0:
        _fail("tol", "must be a positive number")
    outputs = raw.get("outputs", ["sweep", "trajectories", "summary"])
    if not isinstance(outputs, list) or not outputs:
        _fail("outputs", "must be a nonempty list")
    for i, o in enumerate(outputs):
        if o not in ("sweep", "trajectories", "summary"):
            _fail(f"outputs[{i}]", f"unknown report kind {o!r}")
    record_opinions = raw.get("record_opinions", False)
    if not isinstance(record_opinions, bool):
        _fail("record_opinions", "must be a boolean")

    return ExperimentConfig(
        model_kind=kind,
        alphas=alphas,
        ks=ks,
        layer_specs=layer_specs,
        dataset=dataset,
        x0=x0,
        t_max=int(t_max),
        tol=float(tol),
        outputs=tuple(outputs),
        record_opinions=record_opinions,
        raw=raw,
    )


def load_config(path: str | Path) -> ExperimentConfig:
    with Path(path).open() as fh:
        return parse_config(json.load(fh))


def config_hash(raw: dict) -> str:
    canonical = json.dumps(raw, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()


def _fmt(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return "%.17g" % float(value)
    return str(value)


def build_layers(config: ExperimentConfig) -> list[LayerGraph]:
    if config.dataset is not None:
        d = config.dataset
        return list(load_two_layer_dataset(d.path_a, d.path_b, d.n, d.indexing))
    return [generate(spec) for spec in config.layer_specs]


def resolve_x0(config: ExperimentConfig, n: int) -> np.ndarray:
    spec = config.x0
    if spec.kind == "explicit":
        x = np.asarray(spec.values, dtype=float)
        if x.shape != (n,):
            raise ConfigError(f"x0.values: has length {x.shape[0]}, layers have n={n}")
        return x
    x = np.random.default_rng(spec.seed).random(n)
    if spec.kind == "uniform-with-overrides":
        for node in spec.nodes:
            if not (0 <= node < n):
                raise ConfigError(f"x0.nodes: index {node} out of range for n={n}")
            x[node] = spec.value
    return x


@dataclass
class GridPointResult:
    row: dict
    assertions: dict[str, bool]
    trajectory_rows: list[list[str]] | None


@dataclass
class ExperimentResult:
    all_passed: bool
    summary: dict
    rows: list[dict]
    out_dir: Path | None


def _simulate_point(schedule, x0, config, period, target, pi, n):
    record = config.record_opinions and "trajectories" in config.outputs
    trajectory = simulate(
        schedule,
        x0,
        t_max=config.t_max,
        tol=config.tol,
        period=period,
        target=target,
        pi=pi,
        record_states=record or target is not None,
    )
    return trajectory


def _trajectory_rows(trajectory, config, n) -> list[list[str]]:
    header = ["t", "err_pi", "err_max"]
    include_states = config.record_opinions and trajectory.states is not None
    if include_states:
        header += [f"x_{i}" for i in range(n)]
    rows = [header]
    length = (
        trajectory.errors_pi.shape[0]
        if trajectory.errors_pi is not None
        else (trajectory.states.shape[0] if trajectory.states is not None else 0)
    )
    for t in range(length):
        row = [str(t)]
        if trajectory.errors_pi is not None:
            row += [_fmt(trajectory.errors_pi[t]), _fmt(trajectory.errors_max[t])]
        else:
            row += ["", ""]
        if include_states:
            row += [_fmt(v) for v in trajectory.states[t]]
        rows.append(row)
    return rows


def _fit_or_none(errors, floor=_FIT_FLOOR, burn_in=5):
    if errors is None:
        return None
    try:
        return fit_rate(errors, floor=floor, burn_in=burn_in)
    except ValueError:
        return None


def _merged_point(layers, alpha, x0, interval, config) -> GridPointResult:
    note = ""
    assertions: dict[str, bool] = {}
    model = merge(layers[0], layers[1], alpha)
    bounds = slem_bounds(model)
    slem = bounds.slem_c
    assertions["slem-lower-bound"] = bool(slem >= bounds.lower_bound - _SLEM_SLACK)
    if bounds.degrees_matched:
        assertions["slem-upper-bound"] = bool(slem <= bounds.upper_bound + _SLEM_SLACK)
    consensus = None
    pi = None
    try:
        consensus = merged_consensus(model, x0)
        pi = stationary_from_degrees(model.merged_layer)
    except NotPrimitiveError:
        note = "merged transition not primitive"
    if consensus is not None and interval is not None:
        lo, hi = interval
        assertions["consensus-in-interval"] = bool(
            lo - _INTERVAL_SLACK <= consensus <= hi + _INTERVAL_SLACK
        )
    trajectory = _simulate_point(
        constant_schedule(model.transition), x0, config, 1, consensus, pi, model.merged_layer.n
    )
    empirical = _fit_or_none(trajectory.errors_pi)
    if trajectory.converged and empirical is not None:
        assertions["empirical-rate"] = bool(empirical <= slem + _RATE_SLACK)
    if trajectory.converged and consensus is not None and trajectory.states is not None:
        assertions["simulation-agrees"] = bool(
            np.abs(trajectory.final_state - consensus).max() <= _AGREEMENT_TOL
        )
    row = {
        "grid_kind": "alpha",
        "grid_value": alpha,
        "slem": slem,
        "bound_lower": bounds.lower_bound,
        "bound_upper": bounds.upper_bound,
        "bound_armed": bounds.degrees_matched,
        "consensus": consensus,
        "interval_lo": interval[0] if interval else None,
        "interval_hi": interval[1] if interval else None,
        "empirical_rate": empirical,
        "converged": trajectory.converged,
        "assertions_pass": all(assertions.values()),
        "note": note,
    }
    rows = _trajectory_rows(trajectory, config, model.merged_layer.n)
    return GridPointResult(row=row, assertions=assertions, trajectory_rows=rows)


def _switching_point(layers, k, x0, config) -> GridPointResult:
    note = ""
    assertions: dict[str, bool] = {}
    model = switching_model(layers[0], layers[1], k)
    outcome = analyze(model, x0)
    assertions["slem-under-rho-star"] = bool(
        outcome.slem_cycle <= outcome.rho_star + _SLEM_SLACK
    )
    consensus = outcome.value
    pi = outcome.pi
    if outcome.status != "consensus":
        note = f"cycle not primitive ({outcome.status})"
    trajectory = _simulate_point(
        lambda t: schedule_matrix(model, t),
        x0,
        config,
        k + 1,
        consensus,
        pi,
        model.layer1.n,
    )
    empirical = None
    if trajectory.errors_max is not None:
        empirical = _fit_or_none(trajectory.errors_max[:: k + 1], burn_in=2)
    if trajectory.converged and empirical is not None:
        # The proved per-cycle decay bound is rho_star; the cycle SLEM is the
        # asymptotic rate but a finite-window fit may land slightly above it.
        assertions["empirical-rate"] = bool(empirical <= outcome.rho_star + _RATE_SLACK)
    if trajectory.converged and consensus is not None and trajectory.states is not None:
        assertions["simulation-agrees"] = bool(
            np.abs(trajectory.final_state - consensus).max() <= _AGREEMENT_TOL
        )
    row = {
        "grid_kind": "k",
        "grid_value": k,
        "slem": outcome.slem_cycle,
        "bound_lower": None,
        "bound_upper": outcome.rho_star,
        "bound_armed": True,
        "consensus": consensus,
        "interval_lo": None,
        "interval_hi": None,
        "empirical_rate": empirical,
        "converged": trajectory.converged,
        "assertions_pass": all(assertions.values()),
        "note": note,
    }
    rows = _trajectory_rows(trajectory, config, model.layer1.n)
    return GridPointResult(row=row, assertions=assertions, trajectory_rows=rows)


def _single_point(layer, x0, config) -> GridPointResult:
    note = ""
    assertions: dict[str, bool] = {}
    matrix = transition_matrix(layer)
    slem = slem_reversible(layer).slem
    consensus = None
    pi = None
    if is_primitive(matrix).primitive:
        pi = stationary_from_degrees(layer)
        consensus = consensus_value(pi, x0)
    else:
        note = "layer transition not primitive"
    trajectory = _simulate_point(
        constant_schedule(matrix), x0, config, 1, consensus, pi, layer.n
    )
    empirical = _fit_or_none(trajectory.errors_pi)
    if trajectory.converged and empirical is not None:
        assertions["empirical-rate"] = bool(empirical <= slem + _RATE_SLACK)
    if consensus is not None and 0.0 < slem < 1.0:
        assertions["decay-law"] = decay_check(trajectory, slem).passed
    if trajectory.converged and consensus is not None and trajectory.states is not None:
        assertions["simulation-agrees"] = bool(
            np.abs(trajectory.final_state - consensus).max() <= _AGREEMENT_TOL
        )
    row = {
        "grid_kind": "single",
        "grid_value": 0,
        "slem": slem,
        "bound_lower": None,
        "bound_upper": None,
        "bound_armed": False,
        "consensus": consensus,
        "interval_lo": None,
        "interval_hi": None,
        "empirical_rate": empirical,
        "converged": trajectory.converged,
        "assertions_pass": all(assertions.values()),
        "note": note,
    }
    rows = _trajectory_rows(trajectory, config, layer.n)
    return GridPointResult(row=row, assertions=assertions, trajectory_rows=rows)


def run_experiment(
    config: ExperimentConfig | dict, out_dir: str | Path | None = None
) -> ExperimentResult:
    if isinstance(config, dict):
        config = parse_config(config)
    layers = build_layers(config)
    n = layers[0].n
    x0 = resolve_x0(config, n)

    # The interval endpoints depend only on the layers and x0, not on alpha.
    interval = None
    if config.model_kind == "merged":
        try:
            interval = consensus_interval(merge(layers[0], layers[1], 0.5), x0)
        except (NotPrimitiveError, ValueError):
            interval = None

    points: list[GridPointResult] = []
    if config.model_kind == "merged":
        for alpha in config.alphas:
            points.append(_merged_point(layers, alpha, x0, interval, config))
    elif config.model_kind == "switching":
        for k in config.ks:
            points.append(_switching_point(layers, k, x0, config))
    else:
        points.append(_single_point(layers[0], x0, config))

    all_passed = all(
        all(p.assertions.values()) for p in points
    )
    summary = {
        "config_hash": config_hash(config.raw),
        "model": config.model_kind,
        "n": n,
        "seeds": _collect_seeds(config),
        "grid": [
            {
                "grid_kind": p.row["grid_kind"],
                "grid_value": p.row["grid_value"],
                "converged": bool(p.row["converged"]),
                "note": p.row["note"],
                "assertions": {k: bool(v) for k, v in sorted(p.assertions.items())},
            }
            for p in points
        ],
        "all_passed": bool(all_passed),
    }

    out_path = None
    if out_dir is not None:
        out_path = Path(out_dir)
        out_path.mkdir(parents=True, exist_ok=True)
        if "sweep" in config.outputs:
            _write_sweep_csv(out_path / "sweep.csv", points)
        if "trajectories" in config.outputs:
            for p in points:
                name = f"trajectory_{p.row['grid_kind']}_{p.row['grid_value']}.csv"
                _write_csv(out_path / name, p.trajectory_rows)
        if "summary" in config.outputs:
            (out_path / "summary.json").write_text(
                json.dumps(summary, indent=2, sort_keys=True) + "\n"
            )
    return ExperimentResult(
        all_passed=all_passed, summary=summary, rows=[p.row for p in points], out_dir=out_path
    )


def _collect_seeds(config: ExperimentConfig) -> dict:
    seeds: dict[str, Any] = {}
    if config.layer_specs is not None:
        for i, spec in enumerate(config.layer_specs):
            seeds[f"layer{i + 1}"] = spec.seed
    if config.x0.seed is not None:
        seeds["x0"] = config.x0.seed
    return seeds


def _write_sweep_csv(path: Path, points: Sequence[GridPointResult]) -> None:
    rows = [SWEEP_COLUMNS]
    for p in points:
        rows.append([_fmt(p.row[c]) for c in SWEEP_COLUMNS])
    _write_csv(path, rows)


def _write_csv(path: Path, rows: Sequence[Sequence[str]]) -> None:
    with path.open("w", newline="\n") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerows(rows)
