"""Row-stochastic transition matrices and their stationary structure.

The averaging dynamics x(t+1) = M x(t) is driven by matrices whose rows are
convex weights. For a matrix read off an undirected layer, row i is the
layer's weight row i divided by the weighted degree d_i, the stationary
distribution is pi_i = d_i / (2|E|), and consensus lands on pi . x(0).
Matrices arising as products (switching cycles) keep none of that structure
and get a generic solver instead.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .netcore import LayerGraph

_ROW_SUM_TOL = 1e-12
_STATIONARY_RESIDUAL_TOL = 1e-12


@dataclass(frozen=True)
class PrimitivityReport:
    """Outcome of the exact primitivity decision.

    witness_exponent is the smallest verified power with all entries
    positive (None when not primitive); bound_used is the Wielandt bound
    (n-1)^2 + 1 that caps the search.
    """

    primitive: bool
    witness_exponent: int | None
    bound_used: int


class NotPrimitiveError(ValueError):
    """An operation requiring a primitive matrix got a non-primitive one."""

    def __init__(self, message: str, report: PrimitivityReport):
        super().__init__(message)
        self.report = report


@dataclass(eq=False)
class TransitionMatrix:
    """N x N row-stochastic matrix with a provenance tag.

    provenance is one of "from-layer", "merged", "product", "raw". Entries
    are renormalized at construction; a row sum off by more than 1e-12
    signals an upstream bug and is rejected rather than rescaled.
    """

    entries: np.ndarray
    provenance: str = "raw"
    _primitivity: PrimitivityReport | None = field(default=None, repr=False, compare=False)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    @classmethod
    def from_entries(cls, entries: np.ndarray, provenance: str = "raw") -> "TransitionMatrix":
        m = np.array(entries, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"transition matrix must be square, got shape {m.shape}")
        if (m < 0).any():
            raise ValueError("transition matrix entries must be nonnegative")
        sums = m.sum(axis=1)
        off = np.abs(sums - 1.0)
        if off.max(initial=0.0) > _ROW_SUM_TOL:
            bad = int(off.argmax())
            raise ValueError(
                f"row {bad} sums to {sums[bad]!r}, more than {_ROW_SUM_TOL} away from 1"
            )
        return cls(entries=m / sums[:, None], provenance=provenance)

    def to_jsonable(self) -> list[list[float]]:
        """Row-major nested lists, for the CLI's --dump output."""
        return self.entries.tolist()


@dataclass(frozen=True)
class StationaryDistribution:
    """Probability vector over nodes; the weights behind the consensus value."""

    pi: np.ndarray

    def __post_init__(self) -> None:
        p = self.pi
        if (p < 0).any():
            raise ValueError("stationary distribution entries must be nonnegative")
        if abs(p.sum() - 1.0) > _ROW_SUM_TOL:
            raise ValueError(f"stationary distribution sums to {p.sum()!r}, not 1")

    @property
    def n(self) -> int:
        return self.pi.shape[0]


def transition_matrix(layer: LayerGraph) -> TransitionMatrix:
    """Degree-normalize a layer: entry (i, j) is w_ij / d_i."""
    if (layer.degrees <= 0).any():
        node = int(np.argmin(layer.degrees))
        raise ValueError(f"node {node} is isolated (zero weighted degree)")
    return TransitionMatrix.from_entries(
        layer.weights / layer.degrees[:, None], provenance="from-layer"
    )


def wielandt_bound(n: int) -> int:
    return (n - 1) ** 2 + 1


def _bool_product(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return (a.astype(np.float64) @ b.astype(np.float64)) > 0.0


def _support_power(exponent: int, squarings: list[np.ndarray]) -> np.ndarray:
    """Support of M^exponent from cached supports of M^(2^j)."""
    result: np.ndarray | None = None
    bit = 0
    e = exponent
    while e:
        if e & 1:
            s = squarings[bit]
            result = s.copy() if result is None else _bool_product(result, s)
        e >>= 1
        bit += 1
    assert result is not None
    return result


def is_primitive(m: TransitionMatrix) -> PrimitivityReport:
    """Exact primitivity test on the boolean support.

    Squares the support until some power within the Wielandt bound is all
    positive, then refines the smallest witness exponent by binary search
    over intermediate products. Row-stochastic matrices have no zero rows,
    so entrywise positivity is monotone in the exponent and the refinement
    is sound. The report is cached on the matrix.
    """
    if m._primitivity is not None:
        return m._primitivity
    n = m.n
    bound = wielandt_bound(n)
    squarings = [m.entries > 0.0]
    # Support of M^(2^j) until positive or the doubling passes the bound.
    while not squarings[-1].all() and 2 ** (len(squarings) - 1) < bound:
        squarings.append(_bool_product(squarings[-1], squarings[-1]))
    if not squarings[-1].all():
        report = PrimitivityReport(primitive=False, witness_exponent=None, bound_used=bound)
        m._primitivity = report
        return report
    lo, hi = 1, 2 ** (len(squarings) - 1)
    while lo < hi:
        mid = (lo + hi) // 2
        if _support_power(mid, squarings).all():
            hi = mid
        else:
            lo = mid + 1
    report = PrimitivityReport(primitive=True, witness_exponent=lo, bound_used=bound)
    m._primitivity = report
    return report


def stationary_from_degrees(layer: LayerGraph) -> StationaryDistribution:
    """Stationary distribution of an undirected layer: pi_i = d_i / (2|E|)."""
    if (layer.degrees <= 0).any():
        node = int(np.argmin(layer.degrees))
        raise ValueError(f"node {node} is isolated (zero weighted degree)")
    return StationaryDistribution(pi=layer.degrees / (2.0 * layer.total_edge_weight))


def stationary_general(
    m: TransitionMatrix,
    tol: float = 1e-13,
    max_iter: int = 10**6,
) -> StationaryDistribution:
    """Left fixed vector of a primitive matrix, normalized to sum 1.

    Left power iteration until successive iterates agree to tol, with a
    dense linear-solve fallback so near-periodic spectra still terminate.
    Intended for nonreversible products where the degree formula does not
    apply; rejects non-primitive input.
    """
    report = is_primitive(m)
    if not report.primitive:
        raise NotPrimitiveError(
            "matrix is not primitive; no unique attracting stationary distribution",
            report,
        )
    p = m.entries
    n = m.n
    v = np.full(n, 1.0 / n)
    converged = False
    for _ in range(max_iter):
        nxt = v @ p
        nxt /= nxt.sum()
        if np.abs(nxt - v).max() < tol:
            v = nxt
            converged = True
            break
        v = nxt
    if not converged:
        v = _stationary_dense_solve(p)
    v = v / v.sum()
    residual = np.abs(v @ p - v).max()
    if residual > _STATIONARY_RESIDUAL_TOL:
        v = _stationary_dense_solve(p)
        v = v / v.sum()
        residual = np.abs(v @ p - v).max()
        if residual > _STATIONARY_RESIDUAL_TOL:
            raise RuntimeError(
                f"stationary solve residual {residual:.3e} exceeds "
                f"{_STATIONARY_RESIDUAL_TOL}"
            )
    return StationaryDistribution(pi=np.abs(v))


def _stationary_dense_solve(p: np.ndarray) -> np.ndarray:
    n = p.shape[0]
    a = p.T - np.eye(n)
    a[-1, :] = 1.0
    b = np.zeros(n)
    b[-1] = 1.0
    return np.linalg.solve(a, b)


def pi_norm(v: np.ndarray, pi: StationaryDistribution | np.ndarray) -> float:
    """Weighted Euclidean norm (sum_i v_i^2 pi_i)^(1/2)."""
    weights = pi.pi if isinstance(pi, StationaryDistribution) else np.asarray(pi, dtype=float)
    vec = np.asarray(v, dtype=float)
    if vec.shape != weights.shape:
        raise ValueError(f"vector length {vec.shape} does not match pi length {weights.shape}")
    return float(np.sqrt(np.sum(vec * vec * weights)))


def max_norm(v: np.ndarray) -> float:
    vec = np.asarray(v, dtype=float)
    return float(np.abs(vec).max()) if vec.size else 0.0


def check_opinions(x0: np.ndarray, n: int | None = None) -> np.ndarray:
    """Validate an opinion vector: entries must lie in [0, 1]."""
    x = np.asarray(x0, dtype=float)
    if n is not None and x.shape != (n,):
        raise ValueError(f"opinion vector has shape {x.shape}, expected ({n},)")
    if (x < 0).any() or (x > 1).any():
        bad = int(np.argmax((x < 0) | (x > 1)))
        raise ValueError(f"opinion x0[{bad}] = {x[bad]!r} outside [0, 1]")
    return x


def consensus_value(pi: StationaryDistribution, x0: np.ndarray) -> float:
    """Consensus opinion pi . x(0); always inside [min x0, max x0]."""
    x = check_opinions(x0, pi.n)
    return float(np.dot(pi.pi, x))


def matrix_power(m: TransitionMatrix, exponent: int) -> TransitionMatrix:
    """M^exponent as a transition matrix with "product" provenance."""
    if exponent < 0:
        raise ValueError("exponent must be nonnegative")
    return TransitionMatrix.from_entries(
        np.linalg.matrix_power(m.entries, exponent), provenance="product"
    )
