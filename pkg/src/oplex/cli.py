"""Command-line lab: simulate (config sweeps), analyze (one model), verify (suites)."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .harness import ConfigError, load_config, run_experiment
from .merged import merge, merged_consensus, slem_bounds
from .netcore import load_edge_list
from .stochastic import NotPrimitiveError, transition_matrix
from .switching import analyze as analyze_switching
from .switching import switching_model
from .verify import SUITES


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="oplex", description="Two-layer multiplex opinion dynamics lab"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="run a config-driven experiment sweep")
    p_sim.add_argument("--config", required=True, help="JSON experiment config")
    p_sim.add_argument("--out", required=True, help="output directory for CSV/JSON reports")

    p_an = sub.add_parser("analyze", help="analyze one merged or switching model")
    p_an.add_argument("--layer1", required=True, help="edge-list file for layer 1")
    p_an.add_argument("--layer2", required=True, help="edge-list file for layer 2")
    p_an.add_argument("--mode", required=True, choices=["merged", "switching"])
    p_an.add_argument("--alpha", type=float, help="blend weight for merged mode")
    p_an.add_argument("--k", type=int, help="steps on layer 1 per cycle for switching mode")
    p_an.add_argument("--n", type=int, help="node count (default: inferred from files)")
    p_an.add_argument(
        "--indexing", default="0-based", choices=["0-based", "1-based"]
    )
    p_an.add_argument(
        "--x0", default="0", help="initial opinions: integer seed or path to a value file"
    )
    p_an.add_argument(
        "--dump", action="store_true", help="include matrices (row-major) in the report"
    )

    p_ver = sub.add_parser("verify", help="run a regression suite")
    p_ver.add_argument("--suite", required=True, choices=sorted(SUITES))

    args = parser.parse_args(argv)
    if args.command == "simulate":
        return _cmd_simulate(args)
    if args.command == "analyze":
        return _cmd_analyze(args)
    return _cmd_verify(args)


def _cmd_simulate(args) -> int:
    try:
        config = load_config(args.config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (OSError, json.JSONDecodeError) as exc:
        print(f"cannot read config: {exc}", file=sys.stderr)
        return 2
    result = run_experiment(config, args.out)
    print(json.dumps(result.summary, indent=2, sort_keys=True))
    return 0 if result.all_passed else 1


def _infer_n(paths: list[str], indexing: str) -> int:
    top = 0
    for path in paths:
        for raw in Path(path).read_text().splitlines():
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            i, j = int(line.split()[0]), int(line.split()[1])
            top = max(top, i, j)
    return top + (0 if indexing == "1-based" else 1)


def _load_x0(arg: str, n: int) -> np.ndarray:
    try:
        seed = int(arg)
    except ValueError:
        values = [float(v) for v in Path(arg).read_text().split()]
        return np.asarray(values, dtype=float)
    return np.random.default_rng(seed).random(n)


def _cmd_analyze(args) -> int:
    if args.mode == "merged" and args.alpha is None:
        print("analyze: merged mode requires --alpha", file=sys.stderr)
        return 2
    if args.mode == "switching" and args.k is None:
        print("analyze: switching mode requires --k", file=sys.stderr)
        return 2
    n = args.n if args.n is not None else _infer_n([args.layer1, args.layer2], args.indexing)
    layer1 = load_edge_list(args.layer1, n, args.indexing)
    layer2 = load_edge_list(args.layer2, n, args.indexing)
    x0 = _load_x0(args.x0, n)

    report: dict = {"mode": args.mode, "n": n}
    ok = True
    if args.mode == "merged":
        model = merge(layer1, layer2, args.alpha)
        bounds = slem_bounds(model)
        report["alpha"] = args.alpha
        report["slem"] = bounds.slem_c
        report["slem_lower_bound"] = bounds.lower_bound
        report["slem_upper_bound"] = bounds.upper_bound
        report["degrees_matched"] = bounds.degrees_matched
        ok &= bounds.slem_c >= bounds.lower_bound - 1e-9
        if bounds.degrees_matched:
            ok &= bounds.slem_c <= bounds.upper_bound + 1e-9
        try:
            report["consensus"] = merged_consensus(model, x0)
        except NotPrimitiveError:
            report["consensus"] = None
            report["note"] = "merged transition not primitive"
        if args.dump:
            report["transition"] = model.transition.to_jsonable()
    else:
        model = switching_model(layer1, layer2, args.k)
        outcome = analyze_switching(model, x0)
        report["k"] = args.k
        report["status"] = outcome.status
        report["slem_cycle"] = outcome.slem_cycle
        report["rho_star"] = outcome.rho_star
        report["consensus"] = outcome.value
        ok &= outcome.slem_cycle <= outcome.rho_star + 1e-9
        if outcome.evidence is not None:
            report["oscillation_gap"] = outcome.evidence.gap
        if args.dump:
            report["cycle"] = model.cycle.to_jsonable()
            report["layer1_transition"] = transition_matrix(layer1).to_jsonable()
            report["layer2_transition"] = transition_matrix(layer2).to_jsonable()
    print(json.dumps(report, indent=2, sort_keys=True))
    return 0 if ok else 1


def _cmd_verify(args) -> int:
    results = SUITES[args.suite]()
    failed = 0
    for check in results:
        status = "PASS" if check.passed else "FAIL"
        detail = f"  ({check.detail})" if check.detail else ""
        print(f"[{status}] {check.name}{detail}")
        failed += 0 if check.passed else 1
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return 0 if failed == 0 else 1


if __name__ == "__main__":
    sys.exit(main())
