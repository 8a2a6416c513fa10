"""Switching two-layer model: k steps on layer 1, one step on layer 2.

One full round of the periodic schedule composes to the cycle matrix B A^k.
Consensus exists iff that product is primitive, a property not inherited
from the factors: two individually primitive layers can interleave into a
periodic product (period-2 oscillation), and a non-primitive layer B can be
repaired by enough mixing through A. Per cycle the error contracts by
rho2(B A^k), itself bounded by rho_star = rho2(B) rho2(A)^k times the two
degree-ratio alignment factors.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .netcore import LayerGraph
from .perturb import ShiftFamilyFit, fit_shift_family
from .spectral import eig_moduli_nonsymmetric, slem_reversible
from .stochastic import (
    NotPrimitiveError,
    StationaryDistribution,
    TransitionMatrix,
    check_opinions,
    consensus_value,
    is_primitive,
    stationary_from_degrees,
    stationary_general,
    transition_matrix,
)

_OSCILLATION_DOUBLINGS = 7  # compares Q^128 / Q^129 against one more doubling
_LIMIT_CONVERGED_TOL = 1e-9
_LIMIT_GAP_TOL = 1e-6


@dataclass(frozen=True)
class SwitchingModel:
    layer1: LayerGraph
    layer2: LayerGraph
    a: TransitionMatrix
    b: TransitionMatrix
    k: int
    cycle: TransitionMatrix


def switching_model(layer1: LayerGraph, layer2: LayerGraph, k: int) -> SwitchingModel:
    """Build the period-(k+1) schedule; k = 0 degenerates to pure layer-2 dynamics."""
    if layer1.n != layer2.n:
        raise ValueError(f"layers have different node counts: {layer1.n} vs {layer2.n}")
    if k < 0:
        raise ValueError(f"steps per cycle k must be >= 0, got {k}")
    a = transition_matrix(layer1)
    b = transition_matrix(layer2)
    cycle = TransitionMatrix.from_entries(
        b.entries @ np.linalg.matrix_power(a.entries, k), provenance="product"
    )
    return SwitchingModel(layer1=layer1, layer2=layer2, a=a, b=b, k=k, cycle=cycle)


def schedule_matrix(model: SwitchingModel, t: int) -> TransitionMatrix:
    """Matrix applied at step t >= 1: B when t is a multiple of k+1, else A."""
    if t < 1:
        raise ValueError(f"schedule steps start at 1, got {t}")
    return model.b if t % (model.k + 1) == 0 else model.a


def cycle_matrix(model: SwitchingModel) -> TransitionMatrix:
    return model.cycle


@dataclass(frozen=True)
class OscillationEvidence:
    """Distinct limits of even and odd cycle powers (period-2 behavior)."""

    even_limit: np.ndarray
    odd_limit: np.ndarray
    gap: float


@dataclass(frozen=True)
class SwitchingOutcome:
    """status is "consensus", "oscillation", or "undetermined".

    rho_star >= slem_cycle - 1e-9 whenever both layers are reversible and
    primitive; it can exceed 1, in which case the bound is vacuous but the
    empirical per-cycle rate is still meaningful.
    """

    status: str
    pi: StationaryDistribution | None
    value: float | None
    evidence: OscillationEvidence | None
    slem_cycle: float
    rho_star: float


def rho_star(model: SwitchingModel) -> float:
    """rho2(B) * rho2(A)^k * max_i(d1_i/d2_i) * max_i(d2_i/d1_i)."""
    d1, d2 = model.layer1.degrees, model.layer2.degrees
    if (d1 <= 0).any() or (d2 <= 0).any():
        raise ValueError("degree-ratio factors require positive degrees in both layers")
    rho_a = slem_reversible(model.layer1).slem
    rho_b = slem_reversible(model.layer2).slem
    return float(rho_b * rho_a**model.k * (d1 / d2).max() * (d2 / d1).max())


def _power_limits(q: np.ndarray) -> tuple[np.ndarray, np.ndarray, bool, bool]:
    even = q.copy()
    for _ in range(_OSCILLATION_DOUBLINGS):
        even = even @ even
    doubled = even @ even
    odd = even @ q
    odd_doubled = doubled @ q
    even_converged = np.abs(doubled - even).max() <= _LIMIT_CONVERGED_TOL
    odd_converged = np.abs(odd_doubled - odd).max() <= _LIMIT_CONVERGED_TOL
    return even, odd, even_converged, odd_converged


def analyze(model: SwitchingModel, x0: np.ndarray) -> SwitchingOutcome:
    """Decide consensus vs oscillation for the switching dynamics.

    Primitive cycle: consensus at pi . x0 with pi the cycle's stationary
    distribution. Otherwise the even and odd cycle-power limits are compared;
    a persistent gap is period-2 oscillation evidence, anything else (higher
    periods, slow transients) is reported as undetermined, not an error.
    """
    x = check_opinions(x0, model.layer1.n)
    slem_cycle = eig_moduli_nonsymmetric(model.cycle).slem
    star = rho_star(model)
    if is_primitive(model.cycle).primitive:
        pi = stationary_general(model.cycle)
        return SwitchingOutcome(
            status="consensus",
            pi=pi,
            value=consensus_value(pi, x),
            evidence=None,
            slem_cycle=slem_cycle,
            rho_star=star,
        )
    even, odd, even_ok, odd_ok = _power_limits(model.cycle.entries)
    gap = float(np.abs(even - odd).max())
    if even_ok and odd_ok and gap > _LIMIT_GAP_TOL:
        return SwitchingOutcome(
            status="oscillation",
            pi=None,
            value=None,
            evidence=OscillationEvidence(even_limit=even, odd_limit=odd, gap=gap),
            slem_cycle=slem_cycle,
            rho_star=star,
        )
    return SwitchingOutcome(
        status="undetermined",
        pi=None,
        value=None,
        evidence=None,
        slem_cycle=slem_cycle,
        rho_star=star,
    )


@dataclass(frozen=True)
class KStabilityResult:
    """Deviations |x_sk(inf) - x_1(inf)| across a k grid.

    Entries for non-primitive cycles are NaN and excluded from the fit.
    fitted_ratio is the geometric ratio of the deviation envelope and must
    stay within 5% above rho2(A) for the sweep to pass.
    """

    ks: np.ndarray
    deviations: np.ndarray
    converged: np.ndarray
    fitted_ratio: float | None
    envelope_constant: float | None
    rho2_a: float
    passed: bool


def k_stability_sweep(
    layer1: LayerGraph,
    layer2: LayerGraph,
    ks: Sequence[int],
    x0: np.ndarray,
    ratio_slack: float = 1.05,
) -> KStabilityResult:
    """How fast the switching consensus approaches layer 1's as k grows."""
    a_matrix = transition_matrix(layer1)
    report = is_primitive(a_matrix)
    if not report.primitive:
        raise NotPrimitiveError("layer1 transition matrix is not primitive", report)
    x = check_opinions(x0, layer1.n)
    x1 = consensus_value(stationary_from_degrees(layer1), x)
    rho_a = slem_reversible(layer1).slem
    grid = np.asarray(list(ks), dtype=int)
    deviations = np.full(grid.shape, np.nan)
    converged = np.zeros(grid.shape, dtype=bool)
    for idx, k in enumerate(grid):
        model = switching_model(layer1, layer2, int(k))
        if not is_primitive(model.cycle).primitive:
            continue
        pi_k = stationary_general(model.cycle)
        deviations[idx] = abs(consensus_value(pi_k, x) - x1)
        converged[idx] = True
    usable = converged & (deviations > 1e-13)
    if usable.sum() >= 2:
        slope, intercept = np.polyfit(grid[usable], np.log(deviations[usable]), 1)
        fitted_ratio = float(np.exp(slope))
        envelope = float(np.max(deviations[usable] / rho_a ** grid[usable]))
        passed = fitted_ratio <= rho_a * ratio_slack
    else:
        # All deviations at the numerical floor (e.g. identical layers).
        fitted_ratio = None
        envelope = None
        passed = True
    return KStabilityResult(
        ks=grid,
        deviations=deviations,
        converged=converged,
        fitted_ratio=fitted_ratio,
        envelope_constant=envelope,
        rho2_a=rho_a,
        passed=passed,
    )


def switching_perturbation_check(
    layer1: LayerGraph,
    perturbed: LayerGraph | Sequence[LayerGraph],
    k: int,
    x0: np.ndarray,
) -> ShiftFamilyFit:
    """Switching-consensus response when layer 2 is a perturbation of layer 1."""
    family = [perturbed] if isinstance(perturbed, LayerGraph) else list(perturbed)
    a_matrix = transition_matrix(layer1)
    report = is_primitive(a_matrix)
    if not report.primitive:
        raise NotPrimitiveError("layer1 transition matrix is not primitive", report)
    x = check_opinions(x0, layer1.n)
    x1 = consensus_value(stationary_from_degrees(layer1), x)
    e_norms = []
    deviations = []
    for b_layer in family:
        model = switching_model(layer1, b_layer, k)
        cycle_report = is_primitive(model.cycle)
        if not cycle_report.primitive:
            raise NotPrimitiveError(
                f"cycle matrix for k={k} is not primitive", cycle_report
            )
        e_norms.append(float(np.abs(a_matrix.entries - model.b.entries).max()))
        pi_k = stationary_general(model.cycle)
        deviations.append(abs(consensus_value(pi_k, x) - x1))
    return fit_shift_family(e_norms, deviations)
