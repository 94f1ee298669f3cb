"""Louvain modularity optimization and community summary tables.

The optimizer is the standard two-phase scheme: local moving of nodes into
the neighboring community with the best modularity gain, then aggregation
of communities into super-nodes, repeated until no move improves anything.
Input graphs are treated as unweighted (every edge weight 1); aggregated
levels are weighted internally. Modularity uses the resolution-scaled null
model  Q = sum_c [ e_c/m - resolution * (d_c / 2m)^2 ].

Determinism: node visit order is a seeded shuffle of the sorted node list,
and equal-gain moves go to the lowest community id.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Mapping

from .corpus import Corpus
from .errors import GraphStructureError
from .graph import SimpleGraph

_GAIN_EPS = 1e-12


@dataclass(frozen=True)
class CommunityAssignment:
    """Node-to-community map plus the run's quality and provenance."""

    membership: Mapping[str, int]
    modularity: float
    resolution: float
    seed: int
    min_community_size: int
    unassigned: frozenset[str]
    pass_modularity: tuple[float, ...]

    def communities(self) -> dict[int, tuple[str, ...]]:
        groups: dict[int, list[str]] = {}
        for node in sorted(self.membership):
            groups.setdefault(self.membership[node], []).append(node)
        return {cid: tuple(nodes) for cid, nodes in sorted(groups.items())}

    def sizes(self) -> dict[int, int]:
        return {cid: len(nodes) for cid, nodes in self.communities().items()}


@dataclass(frozen=True)
class CommunityRow:
    community: int
    size: int
    density: float
    central_fields: tuple[str, ...]
    disciplines: tuple[tuple[str, float], ...]


@dataclass(frozen=True)
class CommunitySummary:
    rows: tuple[CommunityRow, ...]
    unassigned: tuple[str, ...]
    discipline_cutoff: float


def modularity(graph: SimpleGraph, membership: Mapping[str, int], resolution: float = 1.0) -> float:
    """Partition quality on the unit-weight graph."""
    m = graph.m
    if m == 0:
        raise GraphStructureError("modularity is undefined on a graph with no edges")
    internal: dict[int, int] = {}
    degree_sum: dict[int, int] = {}
    for u in graph.nodes:
        c = membership[u]
        degree_sum[c] = degree_sum.get(c, 0) + graph.degree(u)
    for u, v in graph.edges():
        if membership[u] == membership[v]:
            c = membership[u]
            internal[c] = internal.get(c, 0) + 1
    q = 0.0
    for c in sorted(degree_sum):
        q += internal.get(c, 0) / m - resolution * (degree_sum[c] / (2 * m)) ** 2
    return q


class _Level:
    """Weighted working graph for one aggregation level."""

    __slots__ = ("n", "adj", "self_loop", "strength", "members")

    def __init__(self, n: int, adj: list[dict[int, float]], self_loop: list[float], members: list[list[int]]):
        self.n = n
        self.adj = adj
        self.self_loop = self_loop
        self.strength = [sum(adj[u].values()) + 2.0 * self_loop[u] for u in range(n)]
        self.members = members  # original node indices per super-node


def _aggregate(level: _Level, comm: list[int]) -> _Level:
    present = sorted(set(comm))
    remap = {c: i for i, c in enumerate(present)}
    n_new = len(present)
    adj: list[dict[int, float]] = [{} for _ in range(n_new)]
    self_loop = [0.0] * n_new
    members: list[list[int]] = [[] for _ in range(n_new)]
    for u in range(level.n):
        cu = remap[comm[u]]
        self_loop[cu] += level.self_loop[u]
        members[cu].extend(level.members[u])
        for v, w in level.adj[u].items():
            if v <= u:
                continue
            cv = remap[comm[v]]
            if cu == cv:
                self_loop[cu] += w
            else:
                adj[cu][cv] = adj[cu].get(cv, 0.0) + w
                adj[cv][cu] = adj[cv].get(cu, 0.0) + w
    for row in members:
        row.sort()
    return _Level(n_new, adj, self_loop, members)


def louvain(
    graph: SimpleGraph,
    resolution: float = 1.0,
    seed: int = 42,
    min_community_size: int = 2,
) -> CommunityAssignment:
    """Two-phase Louvain on the unit-weight graph.

    ``pass_modularity`` records the flat partition quality after every local
    moving pass; it is non-decreasing. Nodes in communities smaller than
    ``min_community_size`` are reported as unassigned (but still mapped).
    """
    if graph.m == 0:
        raise GraphStructureError("Louvain needs a graph with at least one edge")
    n = graph.n
    m = float(graph.m)
    idx_adj = [dict.fromkeys(nbrs, 1.0) for nbrs in graph.adjacency_indices()]
    level = _Level(n, idx_adj, [0.0] * n, [[i] for i in range(n)])
    rng = random.Random(seed)
    history: list[float] = []

    def flat_membership(comm: list[int]) -> dict[str, int]:
        out: dict[str, int] = {}
        for u in range(level.n):
            for orig in level.members[u]:
                out[graph.nodes[orig]] = comm[u]
        return out

    while True:
        comm = list(range(level.n))
        tot = list(level.strength)
        order = list(range(level.n))
        rng.shuffle(order)
        # instrument pass-level quality on the original graph
        moved_total = 0
        while True:
            moved = 0
            for u in order:
                c_old = comm[u]
                k_u = level.strength[u]
                tot[c_old] -= k_u
                links: dict[int, float] = {}
                for v, w in level.adj[u].items():
                    links[comm[v]] = links.get(comm[v], 0.0) + w
                best_c = c_old
                best_gain = links.get(c_old, 0.0) / m - resolution * tot[c_old] * k_u / (2.0 * m * m)
                for c in sorted(links):
                    if c == c_old:
                        continue
                    gain = links[c] / m - resolution * tot[c] * k_u / (2.0 * m * m)
                    if gain > best_gain + _GAIN_EPS or (gain > best_gain - _GAIN_EPS and c < best_c):
                        best_gain = gain
                        best_c = c
                comm[u] = best_c
                tot[best_c] += k_u
                if best_c != c_old:
                    moved += 1
            history.append(modularity(graph, flat_membership(comm), resolution))
            moved_total += moved
            if moved == 0:
                break
        if moved_total == 0:
            final_comm = comm
            break
        level = _aggregate(level, comm)
        if level.n == 1:
            final_comm = [0]
            break

    raw: dict[str, int] = {}
    for u in range(level.n):
        for orig in level.members[u]:
            raw[graph.nodes[orig]] = final_comm[u]

    groups: dict[int, list[str]] = {}
    for node in graph.nodes:
        groups.setdefault(raw[node], []).append(node)
    ordered = sorted(groups.values(), key=lambda nodes: (-len(nodes), nodes[0]))
    relabel = {id(nodes): cid for cid, nodes in enumerate(ordered)}
    membership = {}
    unassigned: set[str] = set()
    for nodes in ordered:
        cid = relabel[id(nodes)]
        for node in nodes:
            membership[node] = cid
        if len(nodes) < min_community_size:
            unassigned.update(nodes)

    q = modularity(graph, membership, resolution)
    return CommunityAssignment(
        membership={node: membership[node] for node in graph.nodes},
        modularity=q,
        resolution=resolution,
        seed=seed,
        min_community_size=min_community_size,
        unassigned=frozenset(unassigned),
        pass_modularity=tuple(history),
    )


def summarize_communities(
    assignment: CommunityAssignment,
    graph: SimpleGraph,
    corpus: Corpus,
    discipline_cutoff: float = 0.2,
    top_central: int = 3,
) -> CommunitySummary:
    """Per-community size, density, central fields, and discipline mix.

    Densities are 2*e/(s*(s-1)) for size >= 2, else 0. Central fields rank
    by within-subgraph degree (ties by name, then id). Discipline fractions
    count members per level-0 ancestor and keep those >= the cutoff.
    Communities below the assignment's reporting size appear only through
    ``unassigned``.
    """
    rows: list[CommunityRow] = []
    for cid, members in assignment.communities().items():
        if len(members) < assignment.min_community_size:
            continue
        sub = graph.subgraph(members)
        size = len(members)
        density = (2.0 * sub.m / (size * (size - 1))) if size >= 2 else 0.0
        ranked = sorted(members, key=lambda u: (-sub.degree(u), corpus.field_name(u), u))
        central = tuple(corpus.field_name(u) for u in ranked[:top_central])
        counts: dict[str, int] = {}
        for u in members:
            for anc in corpus.level0_ancestors(u):
                name = corpus.field_name(anc)
                counts[name] = counts.get(name, 0) + 1
        disciplines = tuple(
            (name, counts[name] / size)
            for name in sorted(counts, key=lambda d: (-counts[d], d))
            if counts[name] / size >= discipline_cutoff
        )
        rows.append(CommunityRow(cid, size, density, central, disciplines))
    return CommunitySummary(
        rows=tuple(rows),
        unassigned=tuple(sorted(assignment.unassigned)),
        discipline_cutoff=discipline_cutoff,
    )
