"""Weighted network layers sharing a common node set.

A layer is an undirected, loop-free, nonnegatively weighted graph stored
densely. Layers are the raw material for the averaging dynamics: every
transition matrix downstream is a degree normalization of a layer, and the
two-layer models combine layers by weight blending or by time switching.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import networkx as nx
import numpy as np

_DEGREE_TOL = 1e-12


class EdgeListError(ValueError):
    """Malformed edge-list input, with file/line context in the message."""


@dataclass(frozen=True)
class LayerGraph:
    """One undirected weighted layer on nodes 0..n-1.

    weights is symmetric with zero diagonal; degrees[i] is the weighted
    degree (row sum) and total_edge_weight is half the sum of degrees.
    """

    n: int
    weights: np.ndarray
    degrees: np.ndarray
    total_edge_weight: float

    def __post_init__(self) -> None:
        w = self.weights
        if w.shape != (self.n, self.n):
            raise ValueError(f"weight matrix shape {w.shape} does not match n={self.n}")
        if not np.array_equal(w, w.T):
            raise ValueError("weight matrix must be exactly symmetric")
        if np.diagonal(w).any():
            raise ValueError("self-loops are not allowed (nonzero diagonal)")
        if (w < 0).any():
            raise ValueError("edge weights must be nonnegative")
        if np.abs(self.degrees - w.sum(axis=1)).max(initial=0.0) > _DEGREE_TOL:
            raise ValueError("stored degrees disagree with weight row sums")
        if abs(self.total_edge_weight - 0.5 * self.degrees.sum()) > _DEGREE_TOL * max(
            1.0, self.total_edge_weight
        ):
            raise ValueError("total edge weight disagrees with half the degree sum")

    @classmethod
    def from_weights(cls, weights: np.ndarray) -> "LayerGraph":
        w = np.array(weights, dtype=float)
        degrees = w.sum(axis=1)
        return cls(
            n=w.shape[0],
            weights=w,
            degrees=degrees,
            total_edge_weight=0.5 * float(degrees.sum()),
        )

    def neighbors(self, i: int) -> np.ndarray:
        """Indices j with a positive weight on edge (i, j)."""
        return np.nonzero(self.weights[i])[0]


def build_layer(n: int, edges: Iterable[tuple[int, int, float]]) -> LayerGraph:
    """Assemble a layer from an explicit edge list.

    Each entry (i, j, w) with w > 0 sets both (i, j) and (j, i). Self-loops,
    duplicate unordered pairs, and non-positive weights are rejected.
    """
    if n <= 0:
        raise ValueError("node count must be positive")
    w = np.zeros((n, n), dtype=float)
    seen: set[tuple[int, int]] = set()
    for i, j, weight in edges:
        if not (0 <= i < n and 0 <= j < n):
            raise ValueError(f"edge ({i}, {j}) has a node index outside 0..{n - 1}")
        if i == j:
            raise ValueError(f"self-loop on node {i} is not allowed")
        if weight <= 0:
            raise ValueError(f"edge ({i}, {j}) has non-positive weight {weight}")
        key = (min(i, j), max(i, j))
        if key in seen:
            raise ValueError(f"duplicate edge ({i}, {j})")
        seen.add(key)
        w[i, j] = w[j, i] = float(weight)
    return LayerGraph.from_weights(w)


@dataclass(frozen=True)
class GeneratorSpec:
    """Parameters of one seeded random (or deterministic) layer generator.

    kind is one of "erdos-renyi" (edge probability p), "barabasi-albert"
    (attachment count m), "k-regular" (degree k), "circulant" (offsets and a
    shared edge weight).
    """

    kind: str
    n: int
    seed: int = 0
    p: float | None = None
    m: int | None = None
    k: int | None = None
    offsets: tuple[int, ...] | None = None
    weight: float = 1.0

    def __post_init__(self) -> None:
        if self.n <= 0:
            raise ValueError("node count must be positive")
        if self.kind == "erdos-renyi":
            if self.p is None or not (0 < self.p <= 1):
                raise ValueError("erdos-renyi requires edge probability 0 < p <= 1")
        elif self.kind == "barabasi-albert":
            if self.m is None or not (1 <= self.m < self.n):
                raise ValueError("barabasi-albert requires 1 <= m < n")
        elif self.kind == "k-regular":
            if self.k is None or not (0 < self.k < self.n):
                raise ValueError("k-regular requires 0 < k < n")
            if (self.k * self.n) % 2 != 0:
                raise ValueError(f"k-regular infeasible: k*n = {self.k * self.n} is odd")
        elif self.kind == "circulant":
            if not self.offsets:
                raise ValueError("circulant requires a nonempty offset set")
            if any(o % self.n == 0 for o in self.offsets):
                raise ValueError("circulant offsets must be nonzero mod n")
            if self.weight <= 0:
                raise ValueError("circulant edge weight must be positive")
        else:
            raise ValueError(f"unknown generator kind {self.kind!r}")

    @classmethod
    def from_dict(cls, d: dict) -> "GeneratorSpec":
        known = {"kind", "n", "seed", "p", "m", "k", "offsets", "weight"}
        extra = set(d) - known
        if extra:
            raise ValueError(f"unknown generator fields {sorted(extra)}")
        d = dict(d)
        if "offsets" in d and d["offsets"] is not None:
            d["offsets"] = tuple(int(o) for o in d["offsets"])
        return cls(**d)

    def to_dict(self) -> dict:
        out = {"kind": self.kind, "n": self.n, "seed": self.seed}
        for name in ("p", "m", "k"):
            if getattr(self, name) is not None:
                out[name] = getattr(self, name)
        if self.offsets is not None:
            out["offsets"] = list(self.offsets)
            out["weight"] = self.weight
        return out


def generate(spec: GeneratorSpec) -> LayerGraph:
    """Generate a layer from a spec, deterministically for a fixed seed.

    Connectivity is not guaranteed for the random kinds; callers that need
    convergence must check primitivity downstream.
    """
    if spec.kind == "erdos-renyi":
        return _erdos_renyi(spec.n, spec.p, spec.seed)
    if spec.kind == "barabasi-albert":
        return _barabasi_albert(spec.n, spec.m, spec.seed)
    if spec.kind == "k-regular":
        g = nx.random_regular_graph(spec.k, spec.n, seed=spec.seed)
        w = nx.to_numpy_array(g, nodelist=range(spec.n))
        return LayerGraph.from_weights(w)
    if spec.kind == "circulant":
        return _circulant(spec.n, spec.offsets, spec.weight)
    raise ValueError(f"unknown generator kind {spec.kind!r}")


def _erdos_renyi(n: int, p: float, seed: int) -> LayerGraph:
    rng = np.random.default_rng(seed)
    w = np.zeros((n, n), dtype=float)
    iu = np.triu_indices(n, k=1)
    mask = rng.random(iu[0].shape[0]) < p
    w[iu[0][mask], iu[1][mask]] = 1.0
    w += w.T
    return LayerGraph.from_weights(w)


def _barabasi_albert(n: int, m: int, seed: int) -> LayerGraph:
    # Seed graph is a clique on m+1 nodes; each later node attaches m edges
    # drawn proportionally to current degree, without replacement.
    rng = np.random.default_rng(seed)
    w = np.zeros((n, n), dtype=float)
    clique = min(m + 1, n)
    for i in range(clique):
        for j in range(i + 1, clique):
            w[i, j] = w[j, i] = 1.0
    deg = w.sum(axis=1)
    for v in range(clique, n):
        probs = deg[:v] / deg[:v].sum()
        targets = rng.choice(v, size=m, replace=False, p=probs)
        for t in targets:
            w[v, t] = w[t, v] = 1.0
            deg[t] += 1.0
        deg[v] = float(m)
    return LayerGraph.from_weights(w)


def _circulant(n: int, offsets: Sequence[int], weight: float) -> LayerGraph:
    w = np.zeros((n, n), dtype=float)
    for i in range(n):
        for o in offsets:
            j = (i + o) % n
            w[i, j] = w[j, i] = weight
    return LayerGraph.from_weights(w)


def load_edge_list(
    path: str | Path,
    n: int,
    indexing: str = "0-based",
    allowed_weights: Sequence[float] | None = None,
) -> LayerGraph:
    """Read one layer from a whitespace-separated "i j w" text file.

    Lines starting with '#' and blank lines are skipped. With 1-based
    indexing, node labels 1..n map to 0..n-1. If allowed_weights is given,
    any weight outside that set is rejected, naming the offending line.
    """
    if indexing not in ("0-based", "1-based"):
        raise ValueError(f"indexing must be '0-based' or '1-based', got {indexing!r}")
    shift = 1 if indexing == "1-based" else 0
    path = Path(path)
    edges: list[tuple[int, int, float]] = []
    with path.open() as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 3:
                raise EdgeListError(f"{path}:{lineno}: expected 'i j w', got {line!r}")
            try:
                i, j = int(parts[0]) - shift, int(parts[1]) - shift
                weight = float(parts[2])
            except ValueError as exc:
                raise EdgeListError(f"{path}:{lineno}: {exc}") from exc
            if not (0 <= i < n and 0 <= j < n):
                raise EdgeListError(
                    f"{path}:{lineno}: node index out of range for n={n} ({indexing})"
                )
            if allowed_weights is not None and weight not in allowed_weights:
                raise EdgeListError(
                    f"{path}:{lineno}: weight {parts[2]} not in allowed set "
                    f"{sorted(allowed_weights)}"
                )
            edges.append((i, j, weight))
    try:
        return build_layer(n, edges)
    except ValueError as exc:
        raise EdgeListError(f"{path}: {exc}") from exc


def load_two_layer_dataset(
    path_a: str | Path,
    path_b: str | Path,
    n: int,
    indexing: str = "0-based",
) -> tuple[LayerGraph, LayerGraph]:
    """Load the two-layer contact dataset convention onto a shared node set.

    Layer A is an unweighted relation (all weights 1). Layer B carries
    contact-duration classes encoded as weights in {1, 2, 3, 4}.
    """
    layer_a = load_edge_list(path_a, n, indexing, allowed_weights=(1.0,))
    layer_b = load_edge_list(path_b, n, indexing, allowed_weights=(1.0, 2.0, 3.0, 4.0))
    return layer_a, layer_b
