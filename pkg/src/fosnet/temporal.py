"""Directed temporal field-of-study networks over a two-step split.

Papers are partitioned into a pre and a post set, either by disjoint year
windows or by the focal flag (post = focal papers). A directed edge
(src -> dst) counts the authors with at least one pre-period paper tagged
``src`` and at least one post-period paper tagged ``dst``; pre and post node
sets are distinct copies, so self-transitions are legal.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Mapping

from .corpus import Corpus, Paper
from .errors import CapabilityError, ConfigError, GraphStructureError, SplitError, UnknownFieldError

RESTRICT_MODES = ("endpoint", "witness")


@dataclass(frozen=True)
class SplitRule:
    """Two-step partition of papers into pre and post sets."""

    kind: str  # "year" | "focal"
    pre_window: tuple[int, int] | None = None
    post_window: tuple[int, int] | None = None

    def __post_init__(self) -> None:
        if self.kind == "year":
            if self.pre_window is None or self.post_window is None:
                raise SplitError("year split requires pre_window and post_window")
            for lo, hi in (self.pre_window, self.post_window):
                if lo > hi:
                    raise SplitError(f"window ({lo}, {hi}) has min > max")
            a, b = self.pre_window, self.post_window
            if a[0] <= b[1] and b[0] <= a[1]:
                raise SplitError(f"split windows {a} and {b} overlap")
        elif self.kind == "focal":
            pass
        else:
            raise SplitError(f"split kind must be 'year' or 'focal', got {self.kind!r}")

    @classmethod
    def year(cls, pre_window: tuple[int, int], post_window: tuple[int, int]) -> "SplitRule":
        return cls(kind="year", pre_window=pre_window, post_window=post_window)

    @classmethod
    def focal(cls) -> "SplitRule":
        return cls(kind="focal")

    def reversed(self) -> "SplitRule":
        if self.kind != "year":
            raise SplitError("only year splits can be reversed")
        return SplitRule(kind="year", pre_window=self.post_window, post_window=self.pre_window)

    def side(self, paper: Paper) -> str | None:
        """'pre', 'post', or None when the paper falls outside the split."""
        if self.kind == "focal":
            return "post" if paper.focal else "pre"
        assert self.pre_window is not None and self.post_window is not None
        if self.pre_window[0] <= paper.year <= self.pre_window[1]:
            return "pre"
        if self.post_window[0] <= paper.year <= self.post_window[1]:
            return "post"
        return None

    def to_dict(self) -> dict:
        return {"kind": self.kind, "pre_window": self.pre_window, "post_window": self.post_window}


@dataclass(frozen=True)
class TemporalWitness:
    author: str
    pre_papers: tuple[str, ...]   # pre-period papers tagged with the source field
    post_papers: tuple[str, ...]  # post-period papers tagged with the destination field


@dataclass(frozen=True)
class TemporalEdgeData:
    weight: int
    witnesses: tuple[TemporalWitness, ...] | None = None


@dataclass(frozen=True)
class TemporalMeta:
    split: SplitRule
    witnesses_retained: bool = True
    top_k: int | None = None
    restricted_field: str | None = None
    restrict_mode: str | None = None

    def to_dict(self) -> dict:
        return {
            "split": self.split.to_dict(),
            "witnesses_retained": self.witnesses_retained,
            "top_k": self.top_k,
            "restricted_field": self.restricted_field,
            "restrict_mode": self.restrict_mode,
        }


class TemporalFosGraph:
    """Directed field-field graph from the pre period into the post period."""

    def __init__(
        self,
        pre_nodes: Iterable[str],
        post_nodes: Iterable[str],
        edges: Mapping[tuple[str, str], TemporalEdgeData],
        meta: TemporalMeta,
        author_post_fields: Mapping[str, frozenset[str]] | None = None,
    ):
        pre = set(pre_nodes)
        post = set(post_nodes)
        for (src, dst), data in edges.items():
            if src not in pre or dst not in post:
                raise GraphStructureError(f"edge ({src!r} -> {dst!r}) leaves the pre/post node sets")
            if data.weight < 1:
                raise GraphStructureError(f"edge ({src!r} -> {dst!r}) has weight {data.weight} < 1")
            if data.witnesses is not None and len(data.witnesses) != data.weight:
                raise GraphStructureError(
                    f"edge ({src!r} -> {dst!r}): witness count {len(data.witnesses)} != weight {data.weight}"
                )
        self.pre_nodes: tuple[str, ...] = tuple(sorted(pre))
        self.post_nodes: tuple[str, ...] = tuple(sorted(post))
        self.edges: dict[tuple[str, str], TemporalEdgeData] = dict(sorted(edges.items()))
        self.meta = meta
        self.author_post_fields = dict(author_post_fields) if author_post_fields is not None else None

    @property
    def m(self) -> int:
        return len(self.edges)

    def weight(self, src: str, dst: str) -> int:
        return self.edges[(src, dst)].weight

    def edge_weights(self) -> dict[tuple[str, str], int]:
        return {pair: data.weight for pair, data in self.edges.items()}

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TemporalFosGraph):
            return NotImplemented
        return (
            self.pre_nodes == other.pre_nodes
            and self.post_nodes == other.post_nodes
            and self.edges == other.edges
        )

    def __repr__(self) -> str:
        return f"TemporalFosGraph(pre={len(self.pre_nodes)}, post={len(self.post_nodes)}, m={self.m})"


def _author_profile(
    corpus: Corpus, split: SplitRule, author: str
) -> tuple[dict[str, list[str]], dict[str, list[str]]]:
    """Field -> papers maps for the author's pre and post periods."""
    pre: dict[str, list[str]] = {}
    post: dict[str, list[str]] = {}
    for pid in corpus.author_papers.get(author, ()):
        paper = corpus.papers[pid]
        side = split.side(paper)
        if side is None:
            continue
        bucket = pre if side == "pre" else post
        for fid in paper.field_ids:
            bucket.setdefault(fid, []).append(pid)
    return pre, post


def build_temporal(
    corpus: Corpus,
    split: SplitRule,
    *,
    retain_witnesses: bool = True,
    workers: int = 1,
) -> TemporalFosGraph:
    """Directed projection across the split, one weight unit per author."""
    if workers < 1:
        raise ConfigError("workers must be >= 1")
    authors = tuple(sorted(corpus.authors))

    def run(chunk: tuple[str, ...]):
        results = []
        for author in chunk:
            pre, post = _author_profile(corpus, split, author)
            if not pre or not post:
                results.append((author, (), frozenset(post)))
                continue
            contribs = []
            for src in sorted(pre):
                for dst in sorted(post):
                    witness = None
                    if retain_witnesses:
                        witness = TemporalWitness(
                            author=author,
                            pre_papers=tuple(sorted(pre[src])),
                            post_papers=tuple(sorted(post[dst])),
                        )
                    contribs.append(((src, dst), witness))
            results.append((author, tuple(contribs), frozenset(post)))
        return results

    if workers == 1 or len(authors) < 2:
        chunk_results = [run(authors)]
    else:
        size = (len(authors) + workers - 1) // workers
        with ThreadPoolExecutor(max_workers=workers) as pool:
            chunk_results = list(pool.map(run, [authors[i : i + size] for i in range(0, len(authors), size)]))

    counts: dict[tuple[str, str], int] = {}
    witnesses: dict[tuple[str, str], list[TemporalWitness]] = {}
    post_fields: dict[str, frozenset[str]] = {}
    pre_nodes: set[str] = set()
    post_nodes: set[str] = set()
    for chunk in chunk_results:
        for author, contribs, posts in chunk:
            if posts:
                post_fields[author] = posts
                post_nodes.update(posts)
            for pair, witness in contribs:
                counts[pair] = counts.get(pair, 0) + 1
                if witness is not None:
                    witnesses.setdefault(pair, []).append(witness)
    for pid in sorted(corpus.papers):
        paper = corpus.papers[pid]
        side = split.side(paper)
        if side == "pre":
            pre_nodes.update(paper.field_ids)
        elif side == "post":
            post_nodes.update(paper.field_ids)

    edges = {
        pair: TemporalEdgeData(
            weight=count,
            witnesses=tuple(witnesses[pair]) if retain_witnesses else None,
        )
        for pair, count in counts.items()
    }
    meta = TemporalMeta(split=split, witnesses_retained=retain_witnesses)
    return TemporalFosGraph(pre_nodes, post_nodes, edges, meta,
                            author_post_fields=post_fields if retain_witnesses else None)


def top_k_edges(graph: TemporalFosGraph, k: int) -> TemporalFosGraph:
    """Subgraph induced by the k heaviest edges.

    Ties break by (weight desc, src asc, dst asc). Weights and witnesses are
    untouched; node sets shrink to the kept endpoints.
    """
    if k < 1:
        raise ConfigError("k must be >= 1")
    ranked = sorted(graph.edges.items(), key=lambda item: (-item[1].weight, item[0][0], item[0][1]))
    kept = dict(ranked[:k])
    pre = {src for src, _ in kept}
    post = {dst for _, dst in kept}
    meta = TemporalMeta(
        split=graph.meta.split,
        witnesses_retained=graph.meta.witnesses_retained,
        top_k=k,
        restricted_field=graph.meta.restricted_field,
        restrict_mode=graph.meta.restrict_mode,
    )
    return TemporalFosGraph(pre, post, kept, meta, author_post_fields=graph.author_post_fields)


def restrict_post_field(graph: TemporalFosGraph, field_id: str, mode: str = "witness") -> TemporalFosGraph:
    """Keep the flows behind one post-period field.

    ``endpoint`` mode keeps edges whose destination is the field; ``witness``
    mode keeps edges carried by any author who has a post-period paper tagged
    with the field (a superset of endpoint mode).
    """
    if mode not in RESTRICT_MODES:
        raise ConfigError(f"restrict mode must be one of {RESTRICT_MODES}, got {mode!r}")
    if field_id not in graph.post_nodes:
        raise UnknownFieldError(f"field {field_id!r} is not a post-period node")
    if mode == "endpoint":
        kept = {pair: data for pair, data in graph.edges.items() if pair[1] == field_id}
    else:
        if graph.author_post_fields is None:
            raise CapabilityError("witness-mode restriction needs a witness-retaining build")
        anchored = {a for a, fields in graph.author_post_fields.items() if field_id in fields}
        kept = {
            pair: data
            for pair, data in graph.edges.items()
            if data.witnesses is not None and any(w.author in anchored for w in data.witnesses)
        }
    pre = {src for src, _ in kept}
    post = {dst for _, dst in kept}
    meta = TemporalMeta(
        split=graph.meta.split,
        witnesses_retained=graph.meta.witnesses_retained,
        top_k=graph.meta.top_k,
        restricted_field=field_id,
        restrict_mode=mode,
    )
    return TemporalFosGraph(pre, post, kept, meta, author_post_fields=graph.author_post_fields)
