"""Merged two-layer model: dynamics on the blended weights.

The merged layer has weights alpha*W1 + (1-alpha)*W2, so its transition
matrix C averages over the union neighborhood with blended influence. One
primitive layer already makes C primitive for interior alpha; the merged
consensus is a convex combination of the layer consensuses weighted by
alpha|E1| and (1-alpha)|E2|; and the SLEM of C obeys a universal 1/(N-1)
lower bound plus, when the two degree sequences coincide, an upper bound by
the slower layer.
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
    PrimitivityReport,
    TransitionMatrix,
    check_opinions,
    consensus_value,
    is_primitive,
    stationary_from_degrees,
    transition_matrix,
)

_DEGREE_MATCH_RTOL = 1e-9


@dataclass(frozen=True)
class MergedModel:
    alpha: float
    layer1: LayerGraph
    layer2: LayerGraph
    merged_layer: LayerGraph
    transition: TransitionMatrix


def merge(layer1: LayerGraph, layer2: LayerGraph, alpha: float) -> MergedModel:
    """Blend two layers on a shared node set into one model.

    alpha in [0, 1]; the endpoints degenerate to the single layers. Rejects
    nodes isolated in the blended graph (no averaging neighborhood).
    """
    if layer1.n != layer2.n:
        raise ValueError(f"layers have different node counts: {layer1.n} vs {layer2.n}")
    if not (0.0 <= alpha <= 1.0):
        raise ValueError(f"alpha must lie in [0, 1], got {alpha}")
    merged_weights = alpha * layer1.weights + (1.0 - alpha) * layer2.weights
    merged_layer = LayerGraph.from_weights(merged_weights)
    if (merged_layer.degrees <= 0).any():
        node = int(np.argmin(merged_layer.degrees))
        raise ValueError(f"node {node} is isolated in the merged graph")
    transition = TransitionMatrix.from_entries(
        merged_layer.weights / merged_layer.degrees[:, None], provenance="merged"
    )
    return MergedModel(
        alpha=float(alpha),
        layer1=layer1,
        layer2=layer2,
        merged_layer=merged_layer,
        transition=transition,
    )


@dataclass(frozen=True)
class PrimitivityGuarantee:
    """Sufficient-condition verdict next to the direct primitivity check of C."""

    guaranteed: bool
    c_report: PrimitivityReport


def primitivity_guarantee(model: MergedModel) -> PrimitivityGuarantee:
    """Guaranteed iff some layer's matrix is primitive and 0 < alpha < 1."""
    guaranteed = False
    if 0.0 < model.alpha < 1.0:
        for layer in (model.layer1, model.layer2):
            try:
                if is_primitive(transition_matrix(layer)).primitive:
                    guaranteed = True
                    break
            except ValueError:
                continue  # isolated node in that layer: not primitive
    return PrimitivityGuarantee(
        guaranteed=guaranteed, c_report=is_primitive(model.transition)
    )


def merged_consensus(model: MergedModel, x0: np.ndarray) -> float:
    """Consensus of the merged dynamics.

    Evaluates (alpha|E1| x1(inf) + (1-alpha)|E2| x2(inf)) / (alpha|E1| +
    (1-alpha)|E2|) through the blended degrees, which stays defined when a
    node is isolated in one layer only. Requires C primitive.
    """
    report = is_primitive(model.transition)
    if not report.primitive:
        raise NotPrimitiveError("merged transition matrix is not primitive", report)
    x = check_opinions(x0, model.merged_layer.n)
    return consensus_value(stationary_from_degrees(model.merged_layer), x)


def consensus_interval(model: MergedModel, x0: np.ndarray) -> tuple[float, float]:
    """[min, max] of the two single-layer consensuses; contains the merged one."""
    x = check_opinions(x0, model.layer1.n)
    endpoints = []
    for name, layer in (("layer1", model.layer1), ("layer2", model.layer2)):
        matrix = transition_matrix(layer)
        report = is_primitive(matrix)
        if not report.primitive:
            raise NotPrimitiveError(
                f"{name} transition matrix is not primitive; its consensus endpoint "
                "is unavailable",
                report,
            )
        endpoints.append(consensus_value(stationary_from_degrees(layer), x))
    return min(endpoints), max(endpoints)


@dataclass(frozen=True)
class MergedBoundsReport:
    """SLEM of C with the universal lower and conditional upper bound.

    upper_bound is max of the layer SLEMs and is only a proved bound when
    degrees_matched; consensus_interval is filled when x0 was supplied and
    both layers are primitive.
    """

    slem_c: float
    lower_bound: float
    upper_bound: float
    degrees_matched: bool
    consensus_interval: tuple[float, float] | None = None


def degrees_matched(layer1: LayerGraph, layer2: LayerGraph, rtol: float = _DEGREE_MATCH_RTOL) -> bool:
    d1, d2 = layer1.degrees, layer2.degrees
    scale = np.maximum(np.abs(d1), np.abs(d2))
    return bool((np.abs(d1 - d2) <= rtol * np.maximum(scale, 1e-300)).all())


def slem_bounds(model: MergedModel, x0: np.ndarray | None = None) -> MergedBoundsReport:
    """SLEM of C, 1/(N-1) lower bound, and the degree-matched upper bound."""
    matched = degrees_matched(model.layer1, model.layer2)
    if matched:
        slem_c = slem_reversible(model.merged_layer).slem
    else:
        slem_c = eig_moduli_nonsymmetric(model.transition).slem
    try:
        upper = max(
            slem_reversible(model.layer1).slem, slem_reversible(model.layer2).slem
        )
    except ValueError:
        # a node isolated in one layer: that layer has no SLEM, and the
        # degree sequences cannot match, so the upper bound stays unarmed
        upper = float("nan")
    interval = None
    if x0 is not None:
        interval = consensus_interval(model, x0)
    return MergedBoundsReport(
        slem_c=slem_c,
        lower_bound=1.0 / (model.merged_layer.n - 1),
        upper_bound=upper,
        degrees_matched=matched,
        consensus_interval=interval,
    )


@dataclass(frozen=True)
class AlphaStabilityResult:
    """Deviations |x_m(inf) - x_1(inf)| across an alpha grid.

    fitted_constant is the least-squares coefficient of (1 - alpha);
    bound_constant is |E2| / min(|E1|, |E2|) * |x2(inf) - x1(inf)|, which the
    deviations must stay under pointwise.
    """

    alphas: np.ndarray
    deviations: np.ndarray
    fitted_constant: float
    bound_constant: float
    within_bound: bool


def alpha_stability_sweep(
    layer1: LayerGraph,
    layer2: LayerGraph,
    x0: np.ndarray,
    alphas: Sequence[float],
) -> AlphaStabilityResult:
    """How fast the merged consensus approaches layer 1's as alpha -> 1."""
    a_matrix = transition_matrix(layer1)
    report = is_primitive(a_matrix)
    if not report.primitive:
        raise NotPrimitiveError("layer1 transition matrix is not primitive", report)
    x = check_opinions(x0, layer1.n)
    x1 = consensus_value(stationary_from_degrees(layer1), x)
    x2 = consensus_value(stationary_from_degrees(layer2), x)
    e1, e2 = layer1.total_edge_weight, layer2.total_edge_weight
    grid = np.asarray(list(alphas), dtype=float)
    if ((grid < 0) | (grid > 1)).any():
        raise ValueError("alpha grid entries must lie in [0, 1]")
    deviations = np.array(
        [abs(merged_consensus(merge(layer1, layer2, a), x) - x1) for a in grid]
    )
    one_minus = 1.0 - grid
    denom = float(np.sum(one_minus * one_minus))
    fitted = float(np.sum(deviations * one_minus) / denom) if denom > 0 else 0.0
    bound_constant = e2 / min(e1, e2) * abs(x2 - x1)
    within = bool((deviations <= bound_constant * one_minus + 1e-12).all())
    return AlphaStabilityResult(
        alphas=grid,
        deviations=deviations,
        fitted_constant=fitted,
        bound_constant=bound_constant,
        within_bound=within,
    )


def merged_perturbation_check(
    layer1: LayerGraph,
    perturbed: LayerGraph | Sequence[LayerGraph],
    alpha: float,
    x0: np.ndarray,
) -> ShiftFamilyFit:
    """Merged-consensus response when layer 2 is a perturbation of layer 1.

    Accepts one perturbed layer (report-only) or a shrinking family; assertion
    arming and the proportional-decay fit follow fit_shift_family.
    """
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
        b_matrix = transition_matrix(b_layer)
        b_report = is_primitive(b_matrix)
        if not b_report.primitive:
            raise NotPrimitiveError(
                "perturbed layer's transition matrix is not primitive", b_report
            )
        e_norms.append(float(np.abs(a_matrix.entries - b_matrix.entries).max()))
        deviations.append(abs(merged_consensus(merge(layer1, b_layer, alpha), x) - x1))
    return fit_shift_family(e_norms, deviations)
