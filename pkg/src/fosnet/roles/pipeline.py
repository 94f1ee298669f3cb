"""End-to-end structural role learning.

distances -> context graph -> walks -> skip-gram vectors -> k sweep with
silhouette knee -> role ids renumbered by descending mean member degree.
Everything downstream of the graph is a pure function of the hyperparameters
and the seed.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, replace
from typing import Mapping

from ..errors import ConfigError
from ..graph import SimpleGraph
from .clustering import StabilityRow, cluster_stability, select_k_and_cluster
from .context import build_context_graph
from .distances import structural_distances
from .skipgram import Embedding, train_embeddings
from .walks import role_walks


@dataclass(frozen=True)
class RoleParams:
    """Hyperparameters; ``max_layer=None`` means min(diameter, 6)."""

    dim: int = 128
    walks_per_node: int = 10
    walk_length: int = 80
    window: int = 10
    epochs: int = 5
    negative_samples: int = 5
    stay_prob: float = 0.3
    max_layer: int | None = None
    k_min: int = 2
    k_max: int = 25
    restarts: int = 10
    elbow: str = "knee"
    compress: bool = False
    pair_policy: str = "all"
    seed: int = 42

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class RoleModel:
    """Learned role assignment with full provenance."""

    embedding: Embedding
    labels: Mapping[str, int]
    k_selected: int
    silhouette_curve: tuple[tuple[int, float], ...]
    stability: tuple[StabilityRow, ...]
    params: RoleParams

    @property
    def nodes(self) -> tuple[str, ...]:
        return self.embedding.nodes

    def members(self) -> dict[int, tuple[str, ...]]:
        groups: dict[int, list[str]] = {}
        for node in self.nodes:
            groups.setdefault(self.labels[node], []).append(node)
        return {role: tuple(nodes) for role, nodes in sorted(groups.items())}


def _relabel_by_degree(graph: SimpleGraph, labels: Mapping[str, int]) -> dict[str, int]:
    groups: dict[int, list[str]] = {}
    for node in graph.nodes:
        groups.setdefault(labels[node], []).append(node)
    ranked = sorted(
        groups.values(),
        key=lambda nodes: (-sum(graph.degree(u) for u in nodes) / len(nodes), nodes[0]),
    )
    out: dict[str, int] = {}
    for role, nodes in enumerate(ranked):
        for node in nodes:
            out[node] = role
    return out


def learn_roles(graph: SimpleGraph, params: RoleParams | None = None) -> RoleModel:
    """Run the full role pipeline on an undirected simple graph."""
    params = params or RoleParams()
    n = graph.n
    if n < 4:
        raise ConfigError("role learning needs at least 4 nodes")
    k_max = min(params.k_max, n - 1)
    if params.k_min >= k_max:
        raise ConfigError(f"k range ({params.k_min}, {k_max}) is empty for n={n}")

    distances = structural_distances(
        graph,
        max_layer=params.max_layer,
        pair_policy=params.pair_policy,
        compress=params.compress,
    )
    ctx = build_context_graph(distances)
    walks = role_walks(
        ctx,
        walks_per_node=params.walks_per_node,
        walk_length=params.walk_length,
        stay_prob=params.stay_prob,
        seed=params.seed,
    )
    embedding = train_embeddings(
        walks,
        dim=params.dim,
        window=params.window,
        epochs=params.epochs,
        negative_samples=params.negative_samples,
        seed=params.seed,
    )
    selection = select_k_and_cluster(
        embedding.vectors,
        k_min=params.k_min,
        k_max=k_max,
        restarts=params.restarts,
        seed=params.seed,
        elbow=params.elbow,
    )
    raw_labels = {node: selection.labels[i] for i, node in enumerate(embedding.nodes)}
    labels = _relabel_by_degree(graph, raw_labels)
    raw_to_role = {raw_labels[node]: labels[node] for node in embedding.nodes}
    stability = tuple(
        sorted(
            (replace(row, cluster=raw_to_role[row.cluster]) for row in cluster_stability(selection)),
            key=lambda row: row.cluster,
        )
    )
    resolved = replace(params, k_max=k_max, max_layer=distances.max_layer)
    return RoleModel(
        embedding=embedding,
        labels=labels,
        k_selected=selection.k_selected,
        silhouette_curve=selection.silhouette_curve,
        stability=stability,
        params=resolved,
    )
