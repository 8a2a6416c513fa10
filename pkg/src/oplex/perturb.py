"""Exact stationary-distribution response to transition-matrix perturbations.

For stochastic P and P~ with unique stationary vectors pi and pi~, the shift
satisfies pi~ - pi = pi~ E Z with E = P~ - P and Z = (I - P + 1 pi')^-1:
from pi~'(I - P) = pi~'E and (I - P)Z = I - 1 pi', multiplying the first
equation by Z gives pi~' - pi' on the left. The identity is exact at any
perturbation size (replacing pi~ by pi in the product is only a first-order
approximation), which lets tests pin the predicted and recomputed shifts
against each other at tight tolerance. The shrinking-family fit below is
the shared engine behind the small-perturbation stability checks of both
multiplex models.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .stochastic import (
    StationaryDistribution,
    TransitionMatrix,
    stationary_general,
)

_Z_RESIDUAL_TOL = 1e-10
_PI_RESIDUAL_TOL = 1e-10
_ZERO_FAMILY_TOL = 1e-13


@dataclass(frozen=True)
class PerturbationReport:
    e_matrix: np.ndarray
    z_matrix: np.ndarray
    delta_predicted: np.ndarray
    delta_actual: np.ndarray
    max_norm_e: float


def fundamental_matrix(p: TransitionMatrix, pi: StationaryDistribution) -> np.ndarray:
    """Z = (I - P + 1 pi')^-1 by dense LU; validates pi and the inverse residual."""
    n = p.n
    if pi.n != n:
        raise ValueError("stationary distribution size does not match matrix size")
    if np.abs(pi.pi @ p.entries - pi.pi).max() > _PI_RESIDUAL_TOL:
        raise ValueError("pi is not stationary for P (residual above 1e-10)")
    system = np.eye(n) - p.entries + np.outer(np.ones(n), pi.pi)
    try:
        z = np.linalg.inv(system)
    except np.linalg.LinAlgError as exc:
        raise ValueError(
            "I - P + 1 pi' is singular; pi mismatched or P not primitive"
        ) from exc
    residual = np.abs(system @ z - np.eye(n)).max()
    if residual > _Z_RESIDUAL_TOL:
        raise ValueError(f"fundamental-matrix residual {residual:.3e} exceeds 1e-10")
    return z


def stationary_shift(p: TransitionMatrix, p_tilde: TransitionMatrix) -> PerturbationReport:
    """Shift predicted by the exact identity next to the recomputed shift.

    delta_predicted is pi~ E Z; delta_actual is the difference of the two
    independently solved stationary vectors. They agree to solver precision.
    """
    pi = stationary_general(p)
    pi_tilde = stationary_general(p_tilde)
    e = p_tilde.entries - p.entries
    z = fundamental_matrix(p, pi)
    return PerturbationReport(
        e_matrix=e,
        z_matrix=z,
        delta_predicted=pi_tilde.pi @ e @ z,
        delta_actual=pi_tilde.pi - pi.pi,
        max_norm_e=float(np.abs(e).max()),
    )


def shift_bound_check(p: TransitionMatrix, p_tilde: TransitionMatrix) -> float:
    """Empirical ratio ||pi~ - pi||_max / ||P~ - P||_max for one pair."""
    report = stationary_shift(p, p_tilde)
    if report.max_norm_e == 0.0:
        raise ValueError("zero perturbation: ratio undefined")
    return float(np.abs(report.delta_actual).max()) / report.max_norm_e


@dataclass(frozen=True)
class ShiftFamilyFit:
    """Log-log fit of consensus (or pi) shifts against perturbation sizes.

    armed is False outside the small-perturbation regime (sizes too large or
    not spanning a decade), in which case the family is report-only. When
    armed, passed requires slope within slope_tol of 1 and every deviation
    under slack times the fitted proportionality constant.
    """

    e_norms: np.ndarray
    deviations: np.ndarray
    slope: float | None
    constant: float | None
    armed: bool
    passed: bool


def fit_shift_family(
    e_norms: Sequence[float],
    deviations: Sequence[float],
    slack: float = 2.0,
    slope_tol: float = 0.1,
    regime_max: float = 0.1,
    span_min: float = 10.0,
) -> ShiftFamilyFit:
    e = np.asarray(e_norms, dtype=float)
    d = np.asarray(deviations, dtype=float)
    if e.shape != d.shape:
        raise ValueError("perturbation sizes and deviations must align")
    if (d < _ZERO_FAMILY_TOL).all():
        # No measurable response at all (e.g. constant opinions): trivially stable.
        return ShiftFamilyFit(e, d, slope=None, constant=None, armed=False, passed=True)
    armed = (
        e.shape[0] >= 2
        and (e > 0).all()
        and float(e.max()) < regime_max
        and float(e.max()) / float(e.min()) >= span_min
        and (d > 0).all()
    )
    if not armed:
        return ShiftFamilyFit(e, d, slope=None, constant=None, armed=False, passed=True)
    slope, intercept = np.polyfit(np.log(e), np.log(d), 1)
    constant = float(np.exp(intercept))
    proportional = float(np.sum(d * e) / np.sum(e * e))
    within = bool((d <= slack * proportional * e + 1e-15).all())
    passed = bool(abs(slope - 1.0) <= slope_tol) and within
    return ShiftFamilyFit(
        e, d, slope=float(slope), constant=constant, armed=True, passed=passed
    )
