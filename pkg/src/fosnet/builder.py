"""Static field-of-study network construction.

Two steps: an unweighted author-field bipartite graph, then a weighted
undirected projection in which two fields are linked iff at least one
author published in both; the edge weight counts those authors, each
recorded as a witness together with the papers backing both endpoints.

Focal restriction keeps only author contributions anchored in the focal
paper subset: in ``either`` mode at least one endpoint must be witnessed by
one of the author's focal papers, in ``both`` mode both endpoints must be.
Weight thresholding (fixed value or the mean edge weight) prunes the graph
to its strong edges for downstream unweighted analysis.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping

from .corpus import Corpus
from .errors import ConfigError, GraphStructureError
from .graph import SimpleGraph

FOCAL_MODES = ("either", "both")
THRESHOLD_KINDS = ("none", "mean", "fixed")


@dataclass(frozen=True)
class Witness:
    """One author's unit of edge weight, with the papers backing each endpoint."""

    author: str
    papers: Mapping[str, tuple[str, ...]]  # endpoint field id -> sorted paper ids


@dataclass(frozen=True)
class EdgeData:
    weight: int
    witnesses: tuple[Witness, ...] | None = None


@dataclass(frozen=True)
class FosMeta:
    focal_restricted: bool = False
    focal_mode: str | None = None
    witnesses_retained: bool = True
    thresholded: bool = False
    threshold_kind: str = "none"
    threshold_value: float | None = None
    threshold_exact: str | None = None
    mean_weight_exact: str | None = None

    def to_dict(self) -> dict:
        return {
            "focal_restricted": self.focal_restricted,
            "focal_mode": self.focal_mode,
            "witnesses_retained": self.witnesses_retained,
            "thresholded": self.thresholded,
            "threshold_kind": self.threshold_kind,
            "threshold_value": self.threshold_value,
            "threshold_exact": self.threshold_exact,
            "mean_weight_exact": self.mean_weight_exact,
        }


@dataclass(frozen=True)
class BuildConfig:
    """Projection and pruning options for one build."""

    focal_restrict: bool = False
    focal_mode: str = "either"
    threshold_kind: str = "none"
    threshold_value: float | None = None
    drop_isolates: bool = True
    retain_witnesses: bool = True
    workers: int = 1

    def __post_init__(self) -> None:
        if self.focal_mode not in FOCAL_MODES:
            raise ConfigError(f"focal_mode must be one of {FOCAL_MODES}, got {self.focal_mode!r}")
        if self.threshold_kind not in THRESHOLD_KINDS:
            raise ConfigError(f"threshold_kind must be one of {THRESHOLD_KINDS}, got {self.threshold_kind!r}")
        if self.threshold_kind == "fixed":
            if self.threshold_value is None or self.threshold_value <= 0:
                raise ConfigError("fixed threshold requires a value > 0")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")


class BipartiteGraph:
    """Unweighted author-field graph; links annotated with witnessing papers."""

    def __init__(self, links: Mapping[tuple[str, str], tuple[str, ...]]):
        self.links: dict[tuple[str, str], tuple[str, ...]] = dict(sorted(links.items()))
        self.author_nodes: tuple[str, ...] = tuple(sorted({a for a, _ in self.links}))
        self.field_nodes: tuple[str, ...] = tuple(sorted({f for _, f in self.links}))
        self._by_author: dict[str, list[str]] = {}
        for (a, f) in self.links:
            self._by_author.setdefault(a, []).append(f)

    def fields_of(self, author: str) -> tuple[str, ...]:
        return tuple(self._by_author.get(author, ()))

    def papers_of(self, author: str, field_id: str) -> tuple[str, ...]:
        return self.links.get((author, field_id), ())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BipartiteGraph):
            return NotImplemented
        return self.links == other.links


class FosGraph:
    """Weighted undirected field-field graph with per-edge author witnesses."""

    def __init__(
        self,
        nodes: Iterable[str],
        edges: Mapping[tuple[str, str], EdgeData],
        meta: FosMeta | None = None,
    ):
        self.meta = meta or FosMeta()
        node_set = set(nodes)
        for (u, v), data in edges.items():
            if u == v:
                raise GraphStructureError(f"self-loop on field {u!r}")
            if (u, v) != self.key(u, v):
                raise GraphStructureError(f"edge key ({u!r}, {v!r}) is not sorted")
            if u not in node_set or v not in node_set:
                raise GraphStructureError(f"edge ({u!r}, {v!r}) references unknown node")
            if data.weight < 1:
                raise GraphStructureError(f"edge ({u!r}, {v!r}) has weight {data.weight} < 1")
            if data.witnesses is not None and len(data.witnesses) != data.weight:
                raise GraphStructureError(
                    f"edge ({u!r}, {v!r}): witness count {len(data.witnesses)} != weight {data.weight}"
                )
        self.nodes: tuple[str, ...] = tuple(sorted(node_set))
        self.edges: dict[tuple[str, str], EdgeData] = dict(sorted(edges.items()))

    @staticmethod
    def key(u: str, v: str) -> tuple[str, str]:
        return (u, v) if u <= v else (v, u)

    @property
    def n(self) -> int:
        return len(self.nodes)

    @property
    def m(self) -> int:
        return len(self.edges)

    def weight(self, u: str, v: str) -> int:
        return self.edges[self.key(u, v)].weight

    def has_edge(self, u: str, v: str) -> bool:
        return self.key(u, v) in self.edges

    def edge_weights(self) -> dict[tuple[str, str], int]:
        return {pair: data.weight for pair, data in self.edges.items()}

    def simple(self) -> SimpleGraph:
        return SimpleGraph(self.nodes, self.edges.keys())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FosGraph):
            return NotImplemented
        return self.nodes == other.nodes and self.edges == other.edges

    def __repr__(self) -> str:
        return f"FosGraph(n={self.n}, m={self.m}, thresholded={self.meta.thresholded})"


def build_bipartite(corpus: Corpus) -> BipartiteGraph:
    """Link every author to every field they published in, keeping the papers."""
    links: dict[tuple[str, str], list[str]] = {}
    for pid in sorted(corpus.papers):
        paper = corpus.papers[pid]
        for aid in paper.author_ids:
            for fid in paper.field_ids:
                links.setdefault((aid, fid), []).append(pid)
    return BipartiteGraph({key: tuple(pids) for key, pids in links.items()})


def _project_author(
    bipartite: BipartiteGraph,
    corpus: Corpus,
    config: BuildConfig,
    author: str,
) -> list[tuple[tuple[str, str], Witness | None]]:
    fields = sorted(bipartite.fields_of(author))
    if len(fields) < 2:
        return []
    if config.focal_restrict:
        focal_fields = {
            f for f in fields
            if any(corpus.papers[p].focal for p in bipartite.papers_of(author, f))
        }
    out: list[tuple[tuple[str, str], Witness | None]] = []
    for u, v in combinations(fields, 2):
        if config.focal_restrict:
            if config.focal_mode == "either":
                if u not in focal_fields and v not in focal_fields:
                    continue
            else:
                if u not in focal_fields or v not in focal_fields:
                    continue
        witness = None
        if config.retain_witnesses:
            witness = Witness(
                author=author,
                papers={u: bipartite.papers_of(author, u), v: bipartite.papers_of(author, v)},
            )
        out.append(((u, v), witness))
    return out


def project(bipartite: BipartiteGraph, corpus: Corpus, config: BuildConfig | None = None) -> FosGraph:
    """Collapse the bipartite graph into the weighted field-field network.

    Each author counts once per field pair regardless of how many papers
    back it. Authors are processed in sorted order (chunked across workers
    with an ordered merge), so the result is identical for any worker count.
    """
    config = config or BuildConfig()
    authors = bipartite.author_nodes

    def run(chunk: tuple[str, ...]) -> list[list[tuple[tuple[str, str], Witness | None]]]:
        return [_project_author(bipartite, corpus, config, a) for a in chunk]

    if config.workers == 1 or len(authors) < 2:
        chunks_out = [run(authors)]
    else:
        size = (len(authors) + config.workers - 1) // config.workers
        chunks = [authors[i : i + size] for i in range(0, len(authors), size)]
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            chunks_out = list(pool.map(run, chunks))

    counts: dict[tuple[str, str], int] = {}
    witnesses: dict[tuple[str, str], list[Witness]] = {}
    for chunk_result in chunks_out:
        for author_result in chunk_result:
            for pair, witness in author_result:
                counts[pair] = counts.get(pair, 0) + 1
                if witness is not None:
                    witnesses.setdefault(pair, []).append(witness)

    edges = {
        pair: EdgeData(
            weight=count,
            witnesses=tuple(witnesses[pair]) if config.retain_witnesses else None,
        )
        for pair, count in counts.items()
    }
    meta = FosMeta(
        focal_restricted=config.focal_restrict,
        focal_mode=config.focal_mode if config.focal_restrict else None,
        witnesses_retained=config.retain_witnesses,
    )
    return FosGraph(bipartite.field_nodes, edges, meta)


def mean_edge_weight(graph: FosGraph) -> Fraction:
    """Exact arithmetic mean of all edge weights."""
    if not graph.edges:
        raise GraphStructureError("graph has no edges; mean edge weight undefined")
    total = sum(data.weight for data in graph.edges.values())
    return Fraction(total, len(graph.edges))


def threshold(graph: FosGraph, config: BuildConfig) -> FosGraph:
    """Keep edges with weight >= t, comparing against the unrounded mean.

    The result is flagged unweighted-for-analysis but keeps original weights
    and witnesses. Isolated nodes are dropped iff ``config.drop_isolates``.
    A ``none`` threshold returns the graph unchanged.
    """
    if config.threshold_kind == "none":
        return graph
    if config.threshold_kind == "mean":
        t = mean_edge_weight(graph)
        mean_exact: str | None = str(t)
    else:
        t = Fraction(config.threshold_value).limit_denominator(10**9)
        mean_exact = None

    kept = {pair: data for pair, data in graph.edges.items() if Fraction(data.weight) >= t}
    if config.drop_isolates:
        nodes: set[str] = set()
        for u, v in kept:
            nodes.add(u)
            nodes.add(v)
    else:
        nodes = set(graph.nodes)
    meta = replace(
        graph.meta,
        thresholded=True,
        threshold_kind=config.threshold_kind,
        threshold_value=float(t),
        threshold_exact=str(t),
        mean_weight_exact=mean_exact if config.threshold_kind == "mean" else graph.meta.mean_weight_exact,
    )
    return FosGraph(nodes, kept, meta)


def build_fos(corpus: Corpus, config: BuildConfig | None = None) -> FosGraph:
    """Bipartite step, projection, and (when configured) thresholding."""
    config = config or BuildConfig()
    graph = project(build_bipartite(corpus), corpus, config)
    if config.threshold_kind != "none":
        graph = threshold(graph, config)
    return graph
