"""Small hand-built layer pairs exhibiting the model's edge behaviors.

These fixtures back the regression suite and the CLI's verify command:
a pair whose switching cycle oscillates although both layers mix on their
own, a pair with misaligned degrees whose merged SLEM beats both layer
SLEMs, two sparse cycles that merge into the complete graph, and a triangle
pair whose cycle stationary distribution interpolates neither layer's.
"""

from __future__ import annotations

from .netcore import GeneratorSpec, LayerGraph, build_layer, generate


def oscillating_pair() -> tuple[LayerGraph, LayerGraph]:
    """5-node pair: A and B are primitive but the k=1 cycle has period 2."""
    layer1 = build_layer(
        5,
        [(0, 1, 1), (0, 2, 1), (0, 3, 1), (1, 3, 1), (3, 4, 1)],
    )
    layer2 = build_layer(
        5,
        [(0, 4, 1), (1, 2, 1), (1, 4, 1), (2, 3, 1), (2, 4, 1)],
    )
    return layer1, layer2


def misaligned_degree_pair() -> tuple[LayerGraph, LayerGraph]:
    """6-node pair with clashing degree sequences; merging slows mixing."""
    rows1 = [
        [0, 50, 1, 1, 2, 40],
        [50, 0, 3, 1, 50, 50],
        [1, 3, 0, 40, 40, 2],
        [1, 1, 40, 0, 40, 3],
        [2, 50, 40, 40, 0, 1],
        [40, 50, 2, 3, 1, 0],
    ]
    rows2 = [
        [0, 1, 3, 1, 1, 1],
        [1, 0, 1, 2, 1, 3],
        [3, 1, 0, 50, 40, 3],
        [1, 2, 50, 0, 50, 2],
        [1, 1, 40, 50, 0, 1],
        [1, 3, 3, 2, 1, 0],
    ]
    return _layer_from_rows(rows1), _layer_from_rows(rows2)


def complementary_cycles_pair() -> tuple[LayerGraph, LayerGraph]:
    """Two 5-cycles (nearest and next-nearest neighbors) merging into K5."""
    layer1 = generate(GeneratorSpec(kind="circulant", n=5, offsets=(1, 4), weight=0.5))
    layer2 = generate(GeneratorSpec(kind="circulant", n=5, offsets=(2, 3), weight=0.5))
    return layer1, layer2


def triangle_pair() -> tuple[LayerGraph, LayerGraph]:
    """Uniform triangle and a 2-1-1 weighted triangle on 3 nodes."""
    layer1 = build_layer(3, [(0, 1, 0.5), (0, 2, 0.5), (1, 2, 0.5)])
    layer2 = build_layer(3, [(0, 1, 2.0), (0, 2, 1.0), (1, 2, 1.0)])
    return layer1, layer2


def _layer_from_rows(rows: list[list[float]]) -> LayerGraph:
    n = len(rows)
    edges = [
        (i, j, float(rows[i][j]))
        for i in range(n)
        for j in range(i + 1, n)
        if rows[i][j]
    ]
    return build_layer(n, edges)
