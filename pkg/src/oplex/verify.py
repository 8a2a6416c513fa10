"""Regression and property suites shared by the CLI and the test suite.

Three suites: "examples" replays the four hand-built fixtures against
frozen expected values; "bounds" samples random layer pairs and checks the
consensus interval, the SLEM bounds, the product-rate bound, and the
geometric decay law; "perturbation" checks the exact stationary-shift
identity and the four small-perturbation scaling laws.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import fixtures
from .merged import (
    alpha_stability_sweep,
    consensus_interval,
    merge,
    merged_consensus,
    merged_perturbation_check,
    slem_bounds,
)
from .netcore import LayerGraph, build_layer
from .perturb import shift_bound_check, stationary_shift
from .simlab import constant_schedule, decay_check, simulate
from .spectral import eig_moduli_nonsymmetric, slem_reversible
from .stochastic import (
    TransitionMatrix,
    consensus_value,
    is_primitive,
    stationary_from_degrees,
    stationary_general,
    transition_matrix,
)
from .switching import (
    analyze,
    k_stability_sweep,
    rho_star,
    switching_model,
    switching_perturbation_check,
)

BOUNDS_SUITE_SEED = 987654321
PERTURBATION_SUITE_SEED = 24680


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


def _check(name: str, passed: bool, detail: str = "") -> CheckResult:
    return CheckResult(name=name, passed=bool(passed), detail=detail)


# ---------------------------------------------------------------------------
# Frozen expected values for the fixture pairs.

OSCILLATING_CYCLE = np.array(
    [
        [0, 0, 0, 1, 0],
        [1 / 2, 0, 0, 1 / 2, 0],
        [5 / 18, 1 / 9, 0, 1 / 2, 1 / 9],
        [1, 0, 0, 0, 0],
        [1 / 2, 1 / 9, 1 / 9, 5 / 18, 0],
    ]
)

OSCILLATING_ODD_LIMIT = np.array(
    [
        [0, 0, 0, 1, 0],
        [1 / 2, 0, 0, 1 / 2, 0],
        [3 / 8, 0, 0, 5 / 8, 0],
        [1, 0, 0, 0, 0],
        [5 / 8, 0, 0, 3 / 8, 0],
    ]
)

OSCILLATING_EVEN_LIMIT = np.array(
    [
        [1, 0, 0, 0, 0],
        [1 / 2, 0, 0, 1 / 2, 0],
        [5 / 8, 0, 0, 3 / 8, 0],
        [0, 0, 0, 1, 0],
        [3 / 8, 0, 0, 5 / 8, 0],
    ]
)

MISALIGNED_SLEMS = {"merged": 0.6928, "layer1": 0.6839, "layer2": 0.5338}

TRIANGLE_PI_A = np.array([1 / 3, 1 / 3, 1 / 3])
TRIANGLE_PI_B = np.array([3 / 8, 3 / 8, 1 / 4])
TRIANGLE_PI_CYCLE = np.array([3 / 10, 3 / 10, 2 / 5])


def run_examples_suite() -> list[CheckResult]:
    results: list[CheckResult] = []

    # Oscillating pair: exact cycle product, period-2 limits, oscillation verdict.
    osc1, osc2 = fixtures.oscillating_pair()
    model = switching_model(osc1, osc2, k=1)
    cycle_err = np.abs(model.cycle.entries - OSCILLATING_CYCLE).max()
    results.append(
        _check("oscillating/cycle-matrix", cycle_err <= 1e-12, f"max err {cycle_err:.2e}")
    )
    outcome = analyze(model, np.array([1.0, 0.0, 0.0, 0.0, 0.0]))
    results.append(
        _check("oscillating/status", outcome.status == "oscillation", outcome.status)
    )
    if outcome.evidence is not None:
        even_err = np.abs(outcome.evidence.even_limit - OSCILLATING_EVEN_LIMIT).max()
        odd_err = np.abs(outcome.evidence.odd_limit - OSCILLATING_ODD_LIMIT).max()
        results.append(
            _check(
                "oscillating/power-limits",
                even_err <= 1e-9 and odd_err <= 1e-9,
                f"even {even_err:.2e}, odd {odd_err:.2e}",
            )
        )
    else:
        results.append(_check("oscillating/power-limits", False, "no evidence"))

    # Misaligned degrees: merged SLEM strictly above both layer SLEMs.
    mis1, mis2 = fixtures.misaligned_degree_pair()
    mis_model = merge(mis1, mis2, alpha=0.5)
    report = slem_bounds(mis_model)
    rho_a = slem_reversible(mis1).slem
    rho_b = slem_reversible(mis2).slem
    close = (
        abs(report.slem_c - MISALIGNED_SLEMS["merged"]) <= 1e-3
        and abs(rho_a - MISALIGNED_SLEMS["layer1"]) <= 1e-3
        and abs(rho_b - MISALIGNED_SLEMS["layer2"]) <= 1e-3
    )
    results.append(
        _check(
            "misaligned/slem-values",
            close,
            f"C {report.slem_c:.4f}, A {rho_a:.4f}, B {rho_b:.4f}",
        )
    )
    results.append(
        _check(
            "misaligned/upper-bound-violated",
            report.slem_c > max(rho_a, rho_b) and not report.degrees_matched,
            f"{report.slem_c:.4f} > {max(rho_a, rho_b):.4f}",
        )
    )

    # Complementary cycles: merging two slow sparse rings gives the complete graph.
    cyc1, cyc2 = fixtures.complementary_cycles_pair()
    cyc_model = merge(cyc1, cyc2, alpha=0.5)
    off_diag = cyc_model.transition.entries.copy()
    np.fill_diagonal(off_diag, 0.25)
    complete_err = np.abs(off_diag - 0.25).max()
    diag_err = np.abs(np.diagonal(cyc_model.transition.entries)).max()
    results.append(
        _check(
            "complementary-cycles/complete-graph",
            complete_err <= 1e-12 and diag_err <= 1e-12,
            f"off-diag err {complete_err:.2e}",
        )
    )
    cyc_report = slem_bounds(cyc_model)
    lower = 1.0 / (cyc1.n - 1)
    results.append(
        _check(
            "complementary-cycles/lower-bound-attained",
            abs(cyc_report.slem_c - lower) <= 1e-10,
            f"slem {cyc_report.slem_c!r} vs 1/(N-1) = {lower}",
        )
    )
    ring_slem = abs(np.cos(4 * np.pi / 5))
    slems_ok = (
        abs(slem_reversible(cyc1).slem - ring_slem) <= 1e-10
        and abs(slem_reversible(cyc2).slem - ring_slem) <= 1e-10
    )
    results.append(_check("complementary-cycles/ring-slems", slems_ok))

    # Triangle pair: the cycle's stationary vector interpolates neither layer's.
    tri1, tri2 = fixtures.triangle_pair()
    pi_a = stationary_from_degrees(tri1).pi
    pi_b = stationary_from_degrees(tri2).pi
    tri_model = switching_model(tri1, tri2, k=1)
    pi_cycle = stationary_general(tri_model.cycle).pi
    pis_ok = (
        np.abs(pi_a - TRIANGLE_PI_A).max() <= 1e-10
        and np.abs(pi_b - TRIANGLE_PI_B).max() <= 1e-10
        and np.abs(pi_cycle - TRIANGLE_PI_CYCLE).max() <= 1e-10
    )
    results.append(_check("triangle/stationary-vectors", pis_ok))
    outside = all(
        p < min(a, b) or p > max(a, b)
        for p, a, b in zip(pi_cycle, pi_a, pi_b)
    )
    results.append(_check("triangle/non-interpolation", outside))
    return results


# ---------------------------------------------------------------------------
# Random-instance property suite.


def random_layer(rng: np.random.Generator, n: int, dyadic: bool = False) -> LayerGraph:
    """Random connected layer containing a triangle, hence primitive.

    Random attachment tree plus extra edges plus one forced triangle. With
    dyadic=True all weights are multiples of 1/8 so degree arithmetic is
    exact in floating point.
    """
    w = np.zeros((n, n))

    def draw_weight() -> float:
        if dyadic:
            return float(rng.integers(4, 33)) / 8.0
        return float(rng.uniform(0.5, 2.0))

    for v in range(1, n):
        u = int(rng.integers(0, v))
        w[u, v] = w[v, u] = draw_weight()
    extra = max(1, n // 2)
    for _ in range(extra):
        i, j = rng.integers(0, n, size=2)
        if i != j and w[i, j] == 0.0:
            w[i, j] = w[j, i] = draw_weight()
    tri = rng.choice(n, size=3, replace=False)
    for i, j in ((0, 1), (0, 2), (1, 2)):
        a, b = int(tri[i]), int(tri[j])
        if w[a, b] == 0.0:
            w[a, b] = w[b, a] = draw_weight()
    return LayerGraph.from_weights(w)


def degree_matched_pair(
    rng: np.random.Generator, n: int
) -> tuple[LayerGraph, LayerGraph]:
    """Layer pair with exactly equal weighted degree sequences.

    The second layer is the first with weight shifted around random
    4-cycles (+e on two opposite sides, -e on the other two), which leaves
    every degree unchanged; dyadic weights keep the arithmetic exact.
    """
    layer1 = random_layer(rng, n, dyadic=True)
    w = layer1.weights.copy()
    eps = 1.0 / 8.0
    shifts = 0
    for _ in range(8 * n):
        if shifts >= n:
            break
        nodes = rng.choice(n, size=4, replace=False)
        i, j, k, l = (int(v) for v in nodes)
        if w[j, k] >= 2 * eps and w[l, i] >= 2 * eps:
            w[i, j] += eps
            w[j, i] += eps
            w[k, l] += eps
            w[l, k] += eps
            w[j, k] -= eps
            w[k, j] -= eps
            w[l, i] -= eps
            w[i, l] -= eps
            shifts += 1
    return layer1, LayerGraph.from_weights(w)


def reweight_edge(layer: LayerGraph, i: int, j: int, factor: float) -> LayerGraph:
    """Copy of a layer with the weight of edge (i, j) scaled by factor."""
    if layer.weights[i, j] == 0.0:
        raise ValueError(f"({i}, {j}) is not an edge")
    w = layer.weights.copy()
    w[i, j] *= factor
    w[j, i] = w[i, j]
    return LayerGraph.from_weights(w)


def run_bounds_suite(n_instances: int = 200, seed: int = BOUNDS_SUITE_SEED) -> list[CheckResult]:
    results: list[CheckResult] = []
    interval_ok = slem_lower_ok = slem_upper_ok = product_ok = decay_ok = True
    detail = ""
    for idx in range(n_instances):
        rng = np.random.default_rng(seed + idx)
        n = int(rng.integers(4, 21))
        layer1 = random_layer(rng, n)
        layer2 = random_layer(rng, n)
        alpha = float(rng.uniform(0.05, 0.95))
        x0 = rng.random(n)
        model = merge(layer1, layer2, alpha)

        lo, hi = consensus_interval(model, x0)
        value = merged_consensus(model, x0)
        if not (lo - 1e-10 <= value <= hi + 1e-10):
            interval_ok = False
            detail = f"instance {idx}: consensus {value} outside [{lo}, {hi}]"

        report = slem_bounds(model)
        if report.slem_c < report.lower_bound - 1e-9:
            slem_lower_ok = False
            detail = f"instance {idx}: slem {report.slem_c} below 1/(N-1)"

        matched1, matched2 = degree_matched_pair(rng, n)
        matched_report = slem_bounds(merge(matched1, matched2, alpha))
        if not matched_report.degrees_matched:
            slem_upper_ok = False
            detail = f"instance {idx}: constructed pair not degree-matched"
        elif matched_report.slem_c > matched_report.upper_bound + 1e-9:
            slem_upper_ok = False
            detail = (
                f"instance {idx}: matched slem {matched_report.slem_c} above "
                f"{matched_report.upper_bound}"
            )

        for k in range(6):
            s_model = switching_model(layer1, layer2, k)
            star = rho_star(s_model)
            slem_cycle = eig_moduli_nonsymmetric(s_model.cycle).slem
            if slem_cycle > star + 1e-9:
                product_ok = False
                detail = f"instance {idx}: k={k} slem {slem_cycle} above rho* {star}"

        a_matrix = transition_matrix(layer1)
        pi = stationary_from_degrees(layer1)
        target = consensus_value(pi, x0)
        trajectory = simulate(
            constant_schedule(a_matrix),
            x0,
            t_max=20000,
            tol=1e-13,
            target=target,
            pi=pi,
            record_states=False,
        )
        rho_a = slem_reversible(layer1).slem
        if rho_a < 1.0:
            check = decay_check(trajectory, max(rho_a, 1e-12))
            if not check.passed:
                decay_ok = False
                detail = f"instance {idx}: decay margin {check.margin}"

    results.append(_check("bounds/consensus-interval", interval_ok, detail))
    results.append(_check("bounds/slem-lower", slem_lower_ok, detail))
    results.append(_check("bounds/slem-upper-degree-matched", slem_upper_ok, detail))
    results.append(_check("bounds/product-rate", product_ok, detail))
    results.append(_check("bounds/geometric-decay", decay_ok, detail))
    return results


# ---------------------------------------------------------------------------
# Perturbation suite: exact shift identity plus scaling laws.


def _random_positive_stochastic(rng: np.random.Generator, n: int) -> TransitionMatrix:
    m = rng.random((n, n)) + 0.1
    return TransitionMatrix.from_entries(m / m.sum(axis=1, keepdims=True))


def run_perturbation_suite(
    n_pairs: int = 100, seed: int = PERTURBATION_SUITE_SEED
) -> list[CheckResult]:
    results: list[CheckResult] = []

    worst = 0.0
    for idx in range(n_pairs):
        rng = np.random.default_rng(seed + idx)
        n = int(rng.integers(2, 11))
        p = _random_positive_stochastic(rng, n)
        bump = 0.05 * rng.random((n, n))
        p_tilde = TransitionMatrix.from_entries(
            (p.entries + bump) / (p.entries + bump).sum(axis=1, keepdims=True)
        )
        report = stationary_shift(p, p_tilde)
        worst = max(worst, float(np.abs(report.delta_predicted - report.delta_actual).max()))
    results.append(
        _check("perturbation/shift-identity", worst <= 1e-9, f"worst gap {worst:.2e}")
    )

    # Two-state pair with closed-form stationary vectors.
    p2 = TransitionMatrix.from_entries([[0.5, 0.5], [0.5, 0.5]])
    p2_tilde = TransitionMatrix.from_entries([[0.6, 0.4], [0.5, 0.5]])
    report2 = stationary_shift(p2, p2_tilde)
    expected = np.array([1 / 18, -1 / 18])
    results.append(
        _check(
            "perturbation/two-state-shift",
            np.abs(report2.delta_actual - expected).max() <= 1e-12
            and np.abs(report2.delta_predicted - expected).max() <= 1e-9,
        )
    )
    ratio = shift_bound_check(p2, p2_tilde)
    results.append(
        _check("perturbation/two-state-ratio", abs(ratio - 5 / 9) <= 1e-9, f"{ratio!r}")
    )

    tri1, tri2 = fixtures.triangle_pair()
    x0 = np.array([1.0, 0.0, 0.0])

    # Merged consensus approaches layer 1 linearly in (1 - alpha).
    alphas = 1.0 - np.array([1e-1, 1e-2, 1e-3, 1e-4])
    sweep = alpha_stability_sweep(tri1, tri2, x0, alphas)
    slope = np.polyfit(np.log(1.0 - sweep.alphas), np.log(sweep.deviations), 1)[0]
    results.append(
        _check(
            "perturbation/alpha-linear",
            abs(slope - 1.0) <= 0.1 and sweep.within_bound,
            f"slope {slope:.4f}",
        )
    )

    # Merged consensus responds linearly to one reweighted edge pair.
    family = [reweight_edge(tri1, 0, 1, 1.0 + eps) for eps in (1e-2, 1e-3, 1e-4)]
    fit = merged_perturbation_check(tri1, family, alpha=0.5, x0=x0)
    results.append(
        _check(
            "perturbation/merged-edge-linear",
            fit.armed and fit.passed and abs(fit.slope - 1.0) <= 0.1,
            f"slope {fit.slope}",
        )
    )

    # Switching consensus approaches layer 1 geometrically in k.
    ks = list(range(1, 9))
    k_sweep = k_stability_sweep(tri1, tri2, ks, x0)
    results.append(
        _check(
            "perturbation/k-geometric",
            k_sweep.passed and k_sweep.fitted_ratio is not None,
            f"ratio {k_sweep.fitted_ratio} vs rho2(A) {k_sweep.rho2_a}",
        )
    )

    # Switching consensus responds linearly to one reweighted edge pair.
    s_fit = switching_perturbation_check(tri1, family, k=2, x0=x0)
    results.append(
        _check(
            "perturbation/switching-edge-linear",
            s_fit.armed and s_fit.passed and abs(s_fit.slope - 1.0) <= 0.1,
            f"slope {s_fit.slope}",
        )
    )
    return results


SUITES = {
    "examples": run_examples_suite,
    "bounds": run_bounds_suite,
    "perturbation": run_perturbation_suite,
}
