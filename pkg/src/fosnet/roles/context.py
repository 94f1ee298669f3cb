"""Multilayer context graph derived from the structural distance table.

Layer k links every evaluated pair whose distance profile reaches layer k,
with intra-layer weight exp(-f_k(u, v)). Each node copy also connects to
its copies one layer up and down: the up-weight is log(gamma_k(u) + e),
where gamma_k(u) counts layer-k edges at u whose weight exceeds the layer's
mean edge weight, and the down-weight is always 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .distances import DistanceTable


@dataclass(frozen=True)
class _LayerNode:
    neighbors: tuple[str, ...]
    cumulative: np.ndarray  # cumulative intra-layer weights aligned with neighbors


class ContextGraph:
    """Sampling-ready multilayer graph."""

    def __init__(
        self,
        nodes: tuple[str, ...],
        layers: tuple[Mapping[str, _LayerNode], ...],
        up_weights: tuple[Mapping[str, float], ...],
    ):
        self.nodes = nodes
        self.layers = layers
        self.up_weights = up_weights

    @property
    def num_layers(self) -> int:
        return len(self.layers)

    def present(self, layer: int, node: str) -> bool:
        return 0 <= layer < self.num_layers and node in self.layers[layer]

    def intra_neighbors(self, layer: int, node: str) -> tuple[str, ...]:
        entry = self.layers[layer].get(node)
        return entry.neighbors if entry is not None else ()

    def intra_weight(self, layer: int, u: str, v: str) -> float:
        entry = self.layers[layer][u]
        i = entry.neighbors.index(v)
        prev = entry.cumulative[i - 1] if i > 0 else 0.0
        return float(entry.cumulative[i] - prev)

    def up_weight(self, layer: int, node: str) -> float | None:
        """Weight toward the copy one layer up; None when that copy is absent."""
        if layer + 1 >= self.num_layers or node not in self.layers[layer + 1]:
            return None
        return self.up_weights[layer].get(node)

    def sample_intra(self, layer: int, node: str, rng: np.random.Generator) -> str:
        entry = self.layers[layer][node]
        total = entry.cumulative[-1]
        r = rng.random() * total
        i = int(np.searchsorted(entry.cumulative, r, side="right"))
        if i >= len(entry.neighbors):
            i = len(entry.neighbors) - 1
        return entry.neighbors[i]


def build_context_graph(distances: DistanceTable) -> ContextGraph:
    """Assemble layers, intra-layer weights, and the inter-layer ladder."""
    depth = 0
    for profile in distances.pairs.values():
        depth = max(depth, len(profile))
    layer_edges: list[dict[tuple[str, str], float]] = [dict() for _ in range(depth)]
    for (u, v), profile in sorted(distances.pairs.items()):
        for k, f_k in enumerate(profile):
            layer_edges[k][(u, v)] = math.exp(-f_k)

    layers: list[dict[str, _LayerNode]] = []
    up_weights: list[dict[str, float]] = []
    for k in range(depth):
        edges = layer_edges[k]
        nbrs: dict[str, list[tuple[str, float]]] = {}
        for (u, v), w in edges.items():
            nbrs.setdefault(u, []).append((v, w))
            nbrs.setdefault(v, []).append((u, w))
        layer: dict[str, _LayerNode] = {}
        for node in sorted(nbrs):
            pairs = sorted(nbrs[node])
            weights = np.array([w for _, w in pairs], dtype=np.float64)
            layer[node] = _LayerNode(
                neighbors=tuple(v for v, _ in pairs),
                cumulative=np.cumsum(weights),
            )
        layers.append(layer)

        mean_w = sum(edges.values()) / len(edges) if edges else 0.0
        gamma: dict[str, int] = {node: 0 for node in layer}
        for (u, v), w in edges.items():
            if w > mean_w:
                gamma[u] += 1
                gamma[v] += 1
        up_weights.append({node: math.log(gamma[node] + math.e) for node in layer})

    return ContextGraph(nodes=distances.nodes, layers=tuple(layers), up_weights=tuple(up_weights))
