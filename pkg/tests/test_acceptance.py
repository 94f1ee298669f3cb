"""Acceptance suite: one test per criterion, each printing a pass/fail line
with its elapsed time and asserting its runtime budget."""

from __future__ import annotations

import json
import random
import time
from contextlib import contextmanager
from pathlib import Path

import numpy as np
import pytest

from fosnet import (
    BuildConfig,
    IngestConfig,
    RoleParams,
    SplitRule,
    audit_witness_weights,
    build_bipartite,
    build_fos,
    build_temporal,
    centrality_report,
    keyword_frequencies,
    learn_roles,
    load_corpus,
    louvain,
    project,
    select_k_and_cluster,
    structural_distances,
    summarize_roles,
    train_embeddings,
)
from fosnet.centrality import betweenness_all, closeness_all, degree_all, eigenvector_all
from fosnet.cli import main as cli_main
from fosnet.closeread import DEFAULT_STOPWORDS
from fosnet.exports import role_summary_payload
from fosnet.roles import build_context_graph, role_walks

import oracles
from conftest import (
    FIXTURE_CORPUS,
    GOLDEN_DIR,
    SYNTHETIC_CORPUS,
    complete_graph,
    graph_from_edges,
    path_graph,
    random_connected_graph,
    random_corpus,
    star_graph,
)


@contextmanager
def criterion(number: int, description: str, budget_seconds: float):
    start = time.perf_counter()
    try:
        yield
    except BaseException:
        elapsed = time.perf_counter() - start
        print(f"[FAIL] criterion {number} ({elapsed:.2f}s): {description}")
        raise
    elapsed = time.perf_counter() - start
    status = "PASS" if elapsed < budget_seconds else "FAIL"
    print(f"[{status}] criterion {number} ({elapsed:.2f}s, budget {budget_seconds:.0f}s): {description}")
    assert elapsed < budget_seconds, f"criterion {number} exceeded budget: {elapsed:.2f}s"


def assert_json_close(actual, expected, path="$", rel=1e-9):
    if isinstance(expected, dict):
        assert isinstance(actual, dict) and actual.keys() == expected.keys(), f"keys differ at {path}"
        for key in expected:
            assert_json_close(actual[key], expected[key], f"{path}.{key}", rel)
    elif isinstance(expected, list):
        assert isinstance(actual, list) and len(actual) == len(expected), f"length differs at {path}"
        for i, (a, e) in enumerate(zip(actual, expected)):
            assert_json_close(a, e, f"{path}[{i}]", rel)
    elif isinstance(expected, float):
        assert actual == pytest.approx(expected, rel=rel, abs=1e-12), f"float differs at {path}"
    else:
        assert actual == expected, f"value differs at {path}: {actual!r} != {expected!r}"


def _check_projection(corpus, focal_restrict, focal_mode):
    config = BuildConfig(focal_restrict=focal_restrict, focal_mode=focal_mode)
    graph = project(build_bipartite(corpus), corpus, config)
    expected = oracles.project_oracle(corpus, focal_restrict=focal_restrict, focal_mode=focal_mode)
    assert graph.edge_weights() == {pair: len(authors) for pair, authors in expected.items()}
    for pair, authors in expected.items():
        witnesses = graph.edges[pair].witnesses
        assert {w.author for w in witnesses} == authors
        for witness in witnesses:
            for endpoint, papers in witness.papers.items():
                assert papers == oracles.papers_tagging(corpus, witness.author, endpoint)


def test_criterion_1_projection_oracle():
    with criterion(1, "projection equals exhaustive oracle on 200 random corpora", 10.0):
        for i in range(200):
            corpus = random_corpus(random.Random(10_000 + i))
            _check_projection(corpus, focal_restrict=False, focal_mode="either")
            _check_projection(corpus, focal_restrict=True, focal_mode="either")
            _check_projection(corpus, focal_restrict=True, focal_mode="both")


def test_criterion_2_temporal_oracle():
    with criterion(2, "temporal build equals triple-loop oracle on random corpora", 5.0):
        for i in range(200):
            corpus = random_corpus(random.Random(20_000 + i))
            split = SplitRule.focal() if i % 2 == 0 else SplitRule.year((2015, 2017), (2018, 2021))
            graph = build_temporal(corpus, split)
            expected = oracles.temporal_oracle(corpus, split)
            assert graph.edge_weights() == {pair: len(a) for pair, a in expected.items()}
            for pair, authors in expected.items():
                assert {w.author for w in graph.edges[pair].witnesses} == authors


def test_criterion_3_modularity_optimum():
    with criterion(3, "Louvain reaches the exhaustive-partition optimum", 5.0):
        cliques = [f"c{i}" for i in range(4)], [f"d{i}" for i in range(4)]
        edges = [(a, b) for side in cliques for i, a in enumerate(side) for b in side[i + 1 :]]
        edges.append(("c0", "d0"))
        bridged = graph_from_edges(*edges)
        assignment = louvain(bridged, resolution=1.0, seed=42)
        best_q, _ = oracles.best_partition_oracle(bridged)
        assert assignment.modularity == pytest.approx(best_q, abs=1e-12)
        groups = sorted(tuple(g) for g in assignment.communities().values())
        assert groups == [("c0", "c1", "c2", "c3"), ("d0", "d1", "d2", "d3")]

        k5 = complete_graph(5)
        assignment = louvain(k5, resolution=1.0, seed=42)
        best_q, best_groups = oracles.best_partition_oracle(k5)
        assert len(best_groups) == 1
        assert len(set(assignment.membership.values())) == 1
        assert assignment.modularity == pytest.approx(best_q, abs=1e-12)


def test_criterion_4_centrality_fixtures():
    with criterion(4, "centrality closed forms and 12-node oracle agreement", 5.0):
        s5 = star_graph(4)
        betweenness = betweenness_all(s5)
        assert betweenness["center"] == pytest.approx(1.0)
        assert all(betweenness[f"leaf{i}"] == 0.0 for i in range(4))

        p3 = path_graph(3)
        assert betweenness_all(p3)["p1"] == pytest.approx(1.0)

        k3, k4 = complete_graph(3), complete_graph(4)
        assert set(closeness_all(k3).values()) == {1.0}
        raw, norm = degree_all(k4)
        assert set(raw.values()) == {3} and set(norm.values()) == {1.0}
        assert all(v == pytest.approx(1.0) for v in eigenvector_all(k4).values())
        assert all(v == 0.0 for v in betweenness_all(k4).values())

        for seed in range(8):
            graph = random_connected_graph(random.Random(40_000 + seed), 12)
            measured = betweenness_all(graph)
            expected = oracles.betweenness_oracle(graph)
            for node in graph.nodes:
                assert measured[node] == pytest.approx(expected[node], abs=1e-6)
            eig = eigenvector_all(graph)
            eig_expected = oracles.eigenvector_oracle(graph)
            for node in graph.nodes:
                assert eig[node] == pytest.approx(eig_expected[node], abs=1e-6)


def test_criterion_5_struc2vec_structure():
    with criterion(5, "mirrored components embed alike; distance table exact", 60.0):
        # f_k table vs literal recursive-DTW oracle on the 6-node fixture
        tree = graph_from_edges(("a", "b"), ("b", "c"), ("c", "d"), ("d", "e"), ("c", "f"))
        table = structural_distances(tree, max_layer=3)
        assert table.pairs == oracles.structural_distance_oracle(tree, 3)

        # two disjoint isomorphic 8-node components (K4 plus pendant leaves)
        def component(prefix):
            nodes = [f"{prefix}{i}" for i in range(8)]
            edges = [(nodes[i], nodes[j]) for i in range(4) for j in range(i + 1, 4)]
            edges += [(nodes[i], nodes[i + 4]) for i in range(4)]
            return nodes, edges

        a_nodes, a_edges = component("a")
        b_nodes, b_edges = component("b")
        mirrored = graph_from_edges(*(a_edges + b_edges))
        ctx = build_context_graph(structural_distances(mirrored))
        walks = role_walks(ctx, walks_per_node=10, walk_length=80, seed=42)
        embedding = train_embeddings(walks, dim=32, window=10, epochs=5, negative_samples=5, seed=42)
        for a, b in zip(a_nodes, b_nodes):
            assert embedding.cosine(a, b) >= 0.9


def test_criterion_6_model_selection():
    with criterion(6, "two-blob embedding selects k=2 with silhouette > 0.8", 5.0):
        rng = np.random.default_rng(0)
        blobs = np.vstack(
            [rng.normal(0.0, 0.5, size=(30, 2)), rng.normal(10.0, 0.5, size=(30, 2))]
        )
        selection = select_k_and_cluster(blobs, k_min=2, k_max=8, seed=42)
        assert selection.k_selected == 2
        assert dict(selection.silhouette_curve)[2] > 0.8


def test_criterion_7_paper_shape_roles():
    with criterion(7, "synthetic corpus reproduces the published role signature", 120.0):
        corpus = load_corpus(SYNTHETIC_CORPUS, IngestConfig(level=1))
        simple = build_fos(corpus, BuildConfig()).simple()
        report = centrality_report(simple)
        model = learn_roles(simple, RoleParams(dim=32, seed=42))
        summary = summarize_roles(model.labels, report, corpus)

        rows = summary.rows
        # (a) exactly one role is the strict maximum of all four centrality means
        top_by = {}
        for attr in ("mean_degree", "mean_betweenness", "mean_closeness", "mean_eigenvector"):
            values = [getattr(row, attr) for row in rows]
            top = max(values)
            assert values.count(top) == 1, f"tied maximum in {attr}"
            top_by[attr] = rows[values.index(top)].role
        assert len(set(top_by.values())) == 1
        top_row = next(row for row in rows if row.role == top_by["mean_degree"])

        # (b) a bridging role: high betweenness, clearly sub-maximal eigenvector
        assert any(
            row.role != top_row.role
            and row.mean_betweenness >= 0.3 * top_row.mean_betweenness
            and row.mean_eigenvector <= 0.5 * top_row.mean_eigenvector
            for row in rows
        )

        # (c) a peripheral role: mean degree exactly 1.0 and zero betweenness
        assert any(row.mean_degree == 1.0 and row.mean_betweenness == 0.0 for row in rows)

        # golden comparison, deterministic at seed 42
        payload = role_summary_payload(summary, model)
        payload["labels"] = {node: model.labels[node] for node in model.nodes}
        golden = json.loads((GOLDEN_DIR / "synthetic_roles.json").read_text())
        assert_json_close(payload, golden)


def test_criterion_8_end_to_end_determinism(tmp_path):
    with criterion(8, "identical configs produce byte-identical artifacts", 120.0):
        role_flags = ["--dim", "16", "--walks", "4", "--walk-length", "30",
                      "--epochs", "2", "--k-range", "2:6", "--restarts", "3"]

        def tree_bytes(directory: Path) -> dict[str, bytes]:
            return {
                str(p.relative_to(directory)): p.read_bytes()
                for p in sorted(directory.rglob("*"))
                if p.is_file()
            }

        build_dirs = [tmp_path / run / "build" for run in ("one", "two")]
        temporal_dirs = [tmp_path / run / "temporal" for run in ("one", "two")]
        for build_dir, temporal_dir in zip(build_dirs, temporal_dirs):
            assert cli_main(["build", "--input", str(SYNTHETIC_CORPUS), "--level", "1",
                             "--out", str(build_dir)]) == 0
            assert cli_main(["temporal", "--input", str(SYNTHETIC_CORPUS), "--split-kind",
                             "focal", "--top-k", "30", "--out", str(temporal_dir)]) == 0
        assert tree_bytes(build_dirs[0]) == tree_bytes(build_dirs[1])
        assert tree_bytes(temporal_dirs[0]) == tree_bytes(temporal_dirs[1])

        analysis_dirs = [tmp_path / run / "analysis" for run in ("one", "two")]
        for analysis_dir in analysis_dirs:
            assert cli_main(["analyze", "--build", str(build_dirs[0]), "--seed", "42",
                             *role_flags, "--out", str(analysis_dir)]) == 0
        assert tree_bytes(analysis_dirs[0]) == tree_bytes(analysis_dirs[1])


def test_criterion_9_drilldown_audit():
    with criterion(9, "witness counts reproduce weights; keywords match oracle", 30.0):
        fixture = load_corpus(FIXTURE_CORPUS)
        synthetic = load_corpus(SYNTHETIC_CORPUS, IngestConfig(level=1))
        built = [
            build_fos(fixture, BuildConfig()),
            build_fos(fixture, BuildConfig(focal_restrict=True)),
            build_fos(fixture, BuildConfig(focal_restrict=True, focal_mode="both")),
            build_fos(fixture, BuildConfig(threshold_kind="mean")),
            build_temporal(fixture, SplitRule.year((2016, 2018), (2019, 2019))),
            build_temporal(fixture, SplitRule.focal()),
            build_fos(synthetic, BuildConfig()),
            build_temporal(synthetic, SplitRule.focal()),
        ]
        for graph in built:
            assert audit_witness_weights(graph) == len(graph.edges)

        for corpus, pids in ((fixture, list(fixture.papers)), (synthetic, list(synthetic.papers)[:40])):
            ours = keyword_frequencies(pids, corpus, top_n=15)
            expected = oracles.keyword_oracle(corpus, pids, DEFAULT_STOPWORDS, 15)
            assert ours == expected
