"""Node centrality measures for unweighted field graphs.

Conventions, also echoed in report metadata:

- degree centrality: degree / (n - 1)
- betweenness: Brandes dependency accumulation over BFS shortest-path DAGs,
  halved for undirected pairs, then divided by (n-1)(n-2)/2; exact, no
  sampling
- closeness: Wasserman-Faust component scaling
  ((r-1)/(n-1)) * ((r-1)/sum of distances) over the node's component of
  size r, 0.0 for isolated nodes
- eigenvector: power iteration on I + A (the shift makes bipartite-ish
  graphs converge without changing eigenvectors), all-ones start, stopping
  when the successive-iterate infinity-norm difference drops below ``tol``;
  rescaled so the maximum entry is 1, with entries below 1e-7 reported as 0
  (nodes in dominated components)
"""

from __future__ import annotations

import hashlib
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .errors import ConvergenceError, GraphStructureError
from .graph import SimpleGraph

_ZERO_CUTOFF = 1e-7


def graph_fingerprint(graph: SimpleGraph) -> str:
    """Short content hash over the node and edge sets."""
    digest = hashlib.sha256()
    for node in graph.nodes:
        digest.update(node.encode())
        digest.update(b"\x00")
    for u, v in graph.edges():
        digest.update(f"{u}|{v}".encode())
        digest.update(b"\x01")
    return digest.hexdigest()[:16]


@dataclass(frozen=True)
class CentralityReport:
    """All four measures for every node, with the parameters used."""

    graph_id: str
    nodes: tuple[str, ...]
    degree: Mapping[str, int]
    degree_centrality: Mapping[str, float]
    betweenness: Mapping[str, float]
    closeness: Mapping[str, float]
    eigenvector: Mapping[str, float]
    params: Mapping[str, object]

    def row(self, node: str) -> tuple[int, float, float, float, float]:
        return (
            self.degree[node],
            self.degree_centrality[node],
            self.betweenness[node],
            self.closeness[node],
            self.eigenvector[node],
        )


def degree_all(graph: SimpleGraph) -> tuple[dict[str, int], dict[str, float]]:
    """Raw degree and degree/(n-1) per node."""
    n = graph.n
    if n < 2:
        raise GraphStructureError("normalized degree needs at least 2 nodes")
    raw = {u: graph.degree(u) for u in graph.nodes}
    norm = {u: d / (n - 1) for u, d in raw.items()}
    return raw, norm


def _brandes_source(adj: list[tuple[int, ...]], source: int) -> np.ndarray:
    n = len(adj)
    dist = [-1] * n
    sigma = [0] * n
    preds: list[list[int]] = [[] for _ in range(n)]
    dist[source] = 0
    sigma[source] = 1
    order: list[int] = []
    queue = deque([source])
    while queue:
        u = queue.popleft()
        order.append(u)
        for v in adj[u]:
            if dist[v] < 0:
                dist[v] = dist[u] + 1
                queue.append(v)
            if dist[v] == dist[u] + 1:
                sigma[v] += sigma[u]
                preds[v].append(u)
    delta = np.zeros(n)
    for w in reversed(order):
        coeff = (1.0 + delta[w]) / sigma[w]
        for u in preds[w]:
            delta[u] += sigma[u] * coeff
    delta[source] = 0.0
    return delta


def betweenness_all(graph: SimpleGraph, workers: int = 1) -> dict[str, float]:
    """Exact shortest-path betweenness, pair-normalized.

    Per-source contributions are always reduced in sorted source order, so
    any worker count reproduces the sequential float result bit for bit.
    """
    n = graph.n
    adj = graph.adjacency_indices()
    acc = np.zeros(n)
    sources = range(n)
    if workers <= 1 or n < 2:
        for s in sources:
            acc += _brandes_source(adj, s)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            for delta in pool.map(lambda s: _brandes_source(adj, s), sources):
                acc += delta
    acc /= 2.0  # undirected: each pair was counted from both endpoints
    if n > 2:
        acc /= (n - 1) * (n - 2) / 2.0
    else:
        acc[:] = 0.0
    return {u: float(acc[i]) for i, u in enumerate(graph.nodes)}


def closeness_all(graph: SimpleGraph) -> dict[str, float]:
    """Component-scaled closeness, safe for disconnected graphs."""
    n = graph.n
    out: dict[str, float] = {}
    for u in graph.nodes:
        dist = graph.bfs_distances(u)
        r = len(dist)
        total = sum(dist.values())
        if n < 2 or r < 2 or total == 0:
            out[u] = 0.0
        else:
            out[u] = ((r - 1) / (n - 1)) * ((r - 1) / total)
    return out


def eigenvector_all(
    graph: SimpleGraph,
    tol: float = 1e-8,
    max_iter: int = 1000,
    _x0: np.ndarray | None = None,
) -> dict[str, float]:
    """Max-normalized principal eigenvector of the adjacency operator."""
    if graph.m < 1:
        raise GraphStructureError("eigenvector centrality needs at least one edge")
    n = graph.n
    adj = graph.adjacency_indices()
    nbr_arrays = [np.array(nbrs, dtype=np.intp) for nbrs in adj]
    x = np.ones(n) if _x0 is None else np.asarray(_x0, dtype=float).copy()
    if x.shape != (n,) or np.any(x < 0) or not np.any(x > 0):
        raise GraphStructureError("start vector must be nonnegative and nonzero")
    x /= np.linalg.norm(x)
    residual = np.inf
    for _ in range(max_iter):
        y = x.copy()
        for i in range(n):
            if len(nbr_arrays[i]):
                y[i] += x[nbr_arrays[i]].sum()
        y /= np.linalg.norm(y)
        residual = float(np.max(np.abs(y - x)))
        x = y
        if residual < tol:
            break
    else:
        raise ConvergenceError(
            f"power iteration did not converge in {max_iter} iterations (residual {residual:.3e})",
            residual=residual,
        )
    x /= x.max()
    x[x < _ZERO_CUTOFF] = 0.0
    return {u: float(x[i]) for i, u in enumerate(graph.nodes)}


def centrality_report(
    graph: SimpleGraph,
    tol: float = 1e-8,
    max_iter: int = 1000,
    workers: int = 1,
) -> CentralityReport:
    """All four measures assembled; needs n >= 2 and at least one edge."""
    raw, norm = degree_all(graph)
    return CentralityReport(
        graph_id=graph_fingerprint(graph),
        nodes=graph.nodes,
        degree=raw,
        degree_centrality=norm,
        betweenness=betweenness_all(graph, workers=workers),
        closeness=closeness_all(graph),
        eigenvector=eigenvector_all(graph, tol=tol, max_iter=max_iter),
        params={
            "eigenvector_tol": tol,
            "eigenvector_max_iter": max_iter,
            "degree_centrality": "degree / (n - 1)",
            "betweenness": "Brandes, exact, normalized by (n-1)(n-2)/2",
            "closeness": "Wasserman-Faust component scaling",
            "eigenvector": "power iteration on I + A, all-ones start, max-normalized",
        },
    )
