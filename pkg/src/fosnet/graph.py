"""Minimal undirected simple-graph container shared by the analysis modules.

Nodes are strings; adjacency is normalized to sorted tuples so every
traversal order is deterministic regardless of construction order.
"""

from __future__ import annotations

from collections import deque
from typing import Iterable, Iterator, Mapping

from .errors import GraphStructureError


class SimpleGraph:
    """Immutable undirected graph without self-loops or parallel edges."""

    __slots__ = ("nodes", "adj", "_m", "_index")

    def __init__(self, nodes: Iterable[str], edges: Iterable[tuple[str, str]]):
        node_set = set(nodes)
        adj: dict[str, set[str]] = {u: set() for u in node_set}
        for u, v in edges:
            if u == v:
                raise GraphStructureError(f"self-loop on node {u!r}")
            if u not in node_set or v not in node_set:
                raise GraphStructureError(f"edge ({u!r}, {v!r}) references unknown node")
            adj[u].add(v)
            adj[v].add(u)
        self.nodes: tuple[str, ...] = tuple(sorted(node_set))
        self.adj: dict[str, tuple[str, ...]] = {u: tuple(sorted(adj[u])) for u in self.nodes}
        self._m = sum(len(nbrs) for nbrs in self.adj.values()) // 2
        self._index = {u: i for i, u in enumerate(self.nodes)}

    @property
    def n(self) -> int:
        return len(self.nodes)

    @property
    def m(self) -> int:
        return self._m

    def index(self, node: str) -> int:
        return self._index[node]

    def degree(self, node: str) -> int:
        return len(self.adj[node])

    def neighbors(self, node: str) -> tuple[str, ...]:
        return self.adj[node]

    def has_edge(self, u: str, v: str) -> bool:
        return v in self.adj.get(u, ())

    def edges(self) -> Iterator[tuple[str, str]]:
        for u in self.nodes:
            for v in self.adj[u]:
                if u < v:
                    yield (u, v)

    def adjacency_indices(self) -> list[tuple[int, ...]]:
        """Neighbor lists as sorted positional indices, aligned with ``nodes``."""
        return [tuple(self._index[v] for v in self.adj[u]) for u in self.nodes]

    def subgraph(self, keep: Iterable[str]) -> "SimpleGraph":
        keep_set = set(keep)
        edges = [(u, v) for u, v in self.edges() if u in keep_set and v in keep_set]
        return SimpleGraph(keep_set & set(self.nodes), edges)

    def relabeled(self, mapping: Mapping[str, str]) -> "SimpleGraph":
        return SimpleGraph(
            (mapping[u] for u in self.nodes),
            ((mapping[u], mapping[v]) for u, v in self.edges()),
        )

    def bfs_distances(self, source: str) -> dict[str, int]:
        dist = {source: 0}
        queue = deque([source])
        while queue:
            u = queue.popleft()
            for v in self.adj[u]:
                if v not in dist:
                    dist[v] = dist[u] + 1
                    queue.append(v)
        return dist

    def connected_components(self) -> list[tuple[str, ...]]:
        seen: set[str] = set()
        components = []
        for u in self.nodes:
            if u in seen:
                continue
            comp = sorted(self.bfs_distances(u))
            seen.update(comp)
            components.append(tuple(comp))
        return components

    def diameter(self) -> int:
        """Longest shortest path; max over components when disconnected."""
        best = 0
        for u in self.nodes:
            dist = self.bfs_distances(u)
            if dist:
                best = max(best, max(dist.values()))
        return best

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SimpleGraph):
            return NotImplemented
        return self.nodes == other.nodes and self.adj == other.adj

    def __repr__(self) -> str:
        return f"SimpleGraph(n={self.n}, m={self.m})"
