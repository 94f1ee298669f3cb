"""Drill-down from network structure back to the underlying papers.

Edge provenance reconstructs the witness structure recorded at build time;
keyword and subfield frequency counts characterize any paper subset. All
operations are read-only over the corpus and graphs.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

from .builder import FosGraph, Witness
from .corpus import Corpus
from .errors import CapabilityError, UnknownEdgeError, UnknownPaperError
from .temporal import TemporalFosGraph, TemporalWitness

_TOKEN_RE = re.compile(r"[a-z0-9]+")
_MIN_TOKEN_LEN = 3

# Compact default list; override per call or via --stopwords.
DEFAULT_STOPWORDS = frozenset(
    """
    about all also among and any are been between both but can could does
    during each for from further had has have here how into its may more
    most not off one only other our out over per several should some such
    than that the their them then there these they this those through
    toward towards under upon use used using was were what when where
    which while who whose why will with within would you your
    """.split()
)


@dataclass(frozen=True)
class EdgeProvenance:
    """Everything recorded behind one edge."""

    edge: tuple[str, str]
    directed: bool
    witnesses: tuple[Witness, ...] | tuple[TemporalWitness, ...]
    papers: tuple[str, ...]        # all witnessing papers (temporal: post papers tagged dst)
    focal_papers: tuple[str, ...]  # the witnessing papers flagged focal


def papers_for_edge(
    graph: FosGraph | TemporalFosGraph,
    edge: tuple[str, str],
    corpus: Corpus,
) -> EdgeProvenance:
    """Witness structure for one edge, plus the witnessing paper set.

    For temporal graphs the paper set is the post-period papers tagged with
    the destination field whose authors have pre-period papers tagged with
    the source field.
    """
    if isinstance(graph, TemporalFosGraph):
        key = (edge[0], edge[1])
        data = graph.edges.get(key)
        if data is None:
            raise UnknownEdgeError(
                f"no edge {edge[0]!r} -> {edge[1]!r}",
                suggestions=_suggest(f"{edge[0]} -> {edge[1]}", [f"{s} -> {d}" for s, d in graph.edges]),
            )
        if data.witnesses is None:
            raise CapabilityError("graph was built without witness retention")
        papers = sorted({pid for w in data.witnesses for pid in w.post_papers})
        directed = True
        witnesses = data.witnesses
    else:
        key = FosGraph.key(*edge)
        data = graph.edges.get(key)
        if data is None:
            raise UnknownEdgeError(
                f"no edge between {edge[0]!r} and {edge[1]!r}",
                suggestions=_suggest(f"{key[0]} -- {key[1]}", [f"{u} -- {v}" for u, v in graph.edges]),
            )
        if data.witnesses is None:
            raise CapabilityError("graph was built without witness retention")
        papers = sorted({pid for w in data.witnesses for pids in w.papers.values() for pid in pids})
        directed = False
        witnesses = data.witnesses
    for pid in papers:
        if pid not in corpus.papers:
            raise UnknownPaperError(f"witnessing paper {pid!r} is missing from the corpus")
    focal = tuple(pid for pid in papers if corpus.papers[pid].focal)
    return EdgeProvenance(
        edge=key,
        directed=directed,
        witnesses=witnesses,
        papers=tuple(papers),
        focal_papers=focal,
    )


def audit_witness_weights(graph: FosGraph | TemporalFosGraph) -> int:
    """Verify every edge weight equals its witness count; returns edges checked."""
    checked = 0
    for pair, data in graph.edges.items():
        if data.witnesses is None:
            raise CapabilityError("graph was built without witness retention")
        if len(data.witnesses) != data.weight:
            raise CapabilityError(f"edge {pair}: witness count {len(data.witnesses)} != weight {data.weight}")
        checked += 1
    return checked


def tokenize(text: str) -> list[str]:
    """Lowercase, split on non-alphanumeric runs, keep tokens of length >= 3."""
    return [t for t in _TOKEN_RE.findall(text.lower()) if len(t) >= _MIN_TOKEN_LEN]


def keyword_frequencies(
    paper_ids: Iterable[str],
    corpus: Corpus,
    top_n: int = 20,
    stopwords: frozenset[str] | None = None,
) -> list[tuple[str, int]]:
    """Most frequent title/abstract tokens over a paper set.

    Counts raw occurrences (no stemming), ranked by (count desc, term asc).
    """
    stop = DEFAULT_STOPWORDS if stopwords is None else stopwords
    counts: Counter[str] = Counter()
    for pid in sorted(set(paper_ids)):
        paper = corpus.papers.get(pid)
        if paper is None:
            raise UnknownPaperError(f"unknown paper id {pid!r}")
        for text in (paper.title, paper.abstract or ""):
            counts.update(t for t in tokenize(text) if t not in stop)
    ranked = sorted(counts.items(), key=lambda item: (-item[1], item[0]))
    return ranked[:top_n]


def subfield_frequencies(
    paper_ids: Iterable[str],
    corpus: Corpus,
    level: int,
) -> list[tuple[str, int]]:
    """Counts of level-``level`` fields across a paper set, by field name.

    Raises when no paper in the corpus carries a field at that level (the
    level was filtered away at ingest or never existed).
    """
    if level not in corpus.attached_levels():
        raise CapabilityError(f"corpus retains no paper-attached fields at level {level}")
    counts: Counter[str] = Counter()
    names: dict[str, str] = {}
    for pid in sorted(set(paper_ids)):
        paper = corpus.papers.get(pid)
        if paper is None:
            raise UnknownPaperError(f"unknown paper id {pid!r}")
        for fid in paper.field_ids:
            ref = corpus.fields.get(fid)
            if ref is not None and ref.level == level:
                counts[fid] += 1
                names[fid] = ref.name
    ranked = sorted(counts.items(), key=lambda item: (-item[1], names[item[0]]))
    return [(names[fid], count) for fid, count in ranked]


def load_stopwords(path) -> frozenset[str]:
    """One stopword per line; blank lines and ``#`` comments ignored."""
    words: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            word = line.strip().lower()
            if word and not word.startswith("#"):
                words.add(word)
    return frozenset(words)


def _suggest(query: str, candidates: Sequence[str], limit: int = 3) -> tuple[str, ...]:
    import difflib

    return tuple(difflib.get_close_matches(query, candidates, n=limit, cutoff=0.1))
