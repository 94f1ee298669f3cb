from __future__ import annotations

import random
from pathlib import Path

import pytest

from fosnet import IngestConfig, SimpleGraph, corpus_from_records, load_corpus

DATA_DIR = Path(__file__).parent / "data"
FIXTURE_CORPUS = DATA_DIR / "fixture_corpus.jsonl"
SYNTHETIC_CORPUS = DATA_DIR / "synthetic_corpus.jsonl"
GOLDEN_DIR = DATA_DIR / "golden"


@pytest.fixture
def fixture_corpus():
    return load_corpus(FIXTURE_CORPUS)


@pytest.fixture
def synthetic_corpus():
    return load_corpus(SYNTHETIC_CORPUS, IngestConfig(level=1))


def make_record(
    pid: str,
    authors: list[str],
    fields: list[str],
    year: int = 2019,
    focal: bool = False,
    title: str = "",
    abstract: str | None = None,
    levels: dict[str, int] | None = None,
    parents: dict[str, list[str]] | None = None,
) -> dict:
    """Paper record dict; fields default to level 1 with no parents."""
    record = {
        "id": pid,
        "title": title or f"paper {pid}",
        "year": year,
        "authors": [{"id": a} for a in authors],
        "fields": [
            {
                "id": f,
                "name": f,
                "level": (levels or {}).get(f, 1),
                "parents": (parents or {}).get(f, []),
            }
            for f in fields
        ],
        "focal": focal,
    }
    if abstract is not None:
        record["abstract"] = abstract
    return record


def random_corpus(rng: random.Random, max_papers: int = 50, max_authors: int = 30, max_fields: int = 20):
    """Small random corpus with random focal flags and years."""
    n_fields = rng.randint(2, max_fields)
    n_authors = rng.randint(1, max_authors)
    n_papers = rng.randint(1, max_papers)
    field_pool = [f"f{i:02d}" for i in range(n_fields)]
    author_pool = [f"a{i:02d}" for i in range(n_authors)]
    records = []
    for p in range(n_papers):
        authors = rng.sample(author_pool, rng.randint(1, min(3, n_authors)))
        fields = rng.sample(field_pool, rng.randint(1, min(4, n_fields)))
        records.append(
            make_record(
                f"p{p:03d}",
                authors,
                fields,
                year=rng.randint(2015, 2021),
                focal=rng.random() < 0.5,
            )
        )
    return corpus_from_records(records)


def graph_from_edges(*edges: tuple[str, str], extra_nodes: tuple[str, ...] = ()) -> SimpleGraph:
    nodes = set(extra_nodes)
    for u, v in edges:
        nodes.add(u)
        nodes.add(v)
    return SimpleGraph(nodes, edges)


def complete_graph(n: int, prefix: str = "k") -> SimpleGraph:
    nodes = [f"{prefix}{i}" for i in range(n)]
    return SimpleGraph(nodes, [(nodes[i], nodes[j]) for i in range(n) for j in range(i + 1, n)])


def star_graph(leaves: int) -> SimpleGraph:
    nodes = ["center"] + [f"leaf{i}" for i in range(leaves)]
    return SimpleGraph(nodes, [("center", leaf) for leaf in nodes[1:]])


def path_graph(n: int, prefix: str = "p") -> SimpleGraph:
    nodes = [f"{prefix}{i}" for i in range(n)]
    return SimpleGraph(nodes, list(zip(nodes, nodes[1:])))


def random_connected_graph(rng: random.Random, n: int) -> SimpleGraph:
    """Random tree plus extra random edges."""
    nodes = [f"n{i:02d}" for i in range(n)]
    edges = set()
    for i in range(1, n):
        edges.add((nodes[rng.randrange(i)], nodes[i]))
    extra = rng.randint(0, n)
    while extra > 0:
        u, v = rng.sample(nodes, 2)
        key = (u, v) if u < v else (v, u)
        if key not in edges and (key[1], key[0]) not in edges:
            edges.add(key)
            extra -= 1
    return SimpleGraph(nodes, edges)
