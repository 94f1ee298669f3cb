from __future__ import annotations

import random

import pytest

from fosnet import (
    SimpleGraph,
    corpus_from_records,
    louvain,
    modularity,
    summarize_communities,
)
from fosnet.errors import GraphStructureError

import oracles
from conftest import complete_graph, graph_from_edges, make_record, random_connected_graph


def two_cliques_bridge() -> SimpleGraph:
    c = [f"c{i}" for i in range(4)]
    d = [f"d{i}" for i in range(4)]
    edges = [(a, b) for i, a in enumerate(c) for b in c[i + 1 :]]
    edges += [(a, b) for i, a in enumerate(d) for b in d[i + 1 :]]
    edges.append((c[0], d[0]))
    return SimpleGraph(c + d, edges)


class TestLouvain:
    def test_two_cliques_recovered_exactly(self):
        graph = two_cliques_bridge()
        assignment = louvain(graph, resolution=1.0, seed=42)
        groups = assignment.communities()
        assert sorted(tuple(g) for g in groups.values()) == [
            ("c0", "c1", "c2", "c3"),
            ("d0", "d1", "d2", "d3"),
        ]

    def test_two_cliques_modularity_is_global_optimum(self):
        graph = two_cliques_bridge()
        assignment = louvain(graph, resolution=1.0, seed=42)
        best_q, _ = oracles.best_partition_oracle(graph)
        assert assignment.modularity == pytest.approx(best_q, abs=1e-12)

    def test_k5_single_community_is_optimum(self):
        graph = complete_graph(5)
        assignment = louvain(graph, resolution=1.0, seed=42)
        assert len(set(assignment.membership.values())) == 1
        best_q, best_groups = oracles.best_partition_oracle(graph)
        assert len(best_groups) == 1
        assert assignment.modularity == pytest.approx(best_q, abs=1e-12)

    def test_no_edges_is_an_error(self):
        with pytest.raises(GraphStructureError):
            louvain(SimpleGraph(["a", "b"], []))

    def test_every_node_mapped_and_ids_dense_by_size(self):
        graph = graph_from_edges(
            ("a", "b"), ("b", "c"), ("a", "c"), ("x", "y"), ("p", "q"), ("q", "r"), ("r", "p"), ("p", "s")
        )
        assignment = louvain(graph, seed=1)
        assert set(assignment.membership) == set(graph.nodes)
        sizes = assignment.sizes()
        assert sorted(sizes) == list(range(len(sizes)))
        ordered = [sizes[c] for c in sorted(sizes)]
        assert ordered == sorted(ordered, reverse=True)

    def test_reported_modularity_matches_recomputation(self):
        graph = random_connected_graph(random.Random(21), 24)
        assignment = louvain(graph, resolution=1.3, seed=5)
        groups = [list(nodes) for nodes in assignment.communities().values()]
        assert assignment.modularity == pytest.approx(
            oracles.modularity_oracle(graph, groups, 1.3), abs=1e-12
        )

    def test_pass_modularity_non_decreasing(self):
        graph = random_connected_graph(random.Random(22), 30)
        assignment = louvain(graph, seed=7)
        history = assignment.pass_modularity
        assert len(history) >= 1
        for earlier, later in zip(history, history[1:]):
            assert later >= earlier - 1e-12

    def test_beats_singleton_partition(self):
        graph = random_connected_graph(random.Random(23), 20)
        assignment = louvain(graph, seed=3)
        singleton_q = oracles.modularity_oracle(graph, [[u] for u in graph.nodes])
        assert assignment.modularity >= singleton_q

    def test_deterministic_for_same_seed(self):
        graph = random_connected_graph(random.Random(24), 26)
        first = louvain(graph, seed=42)
        second = louvain(graph, seed=42)
        assert first.membership == second.membership
        assert first.modularity == second.modularity

    def test_equivariant_under_order_preserving_relabel(self):
        graph = random_connected_graph(random.Random(25), 18)
        mapping = {u: f"q_{u}" for u in graph.nodes}  # preserves sort order
        base = louvain(graph, seed=42)
        moved = louvain(graph.relabeled(mapping), seed=42)
        assert {mapping[u]: c for u, c in base.membership.items()} == dict(moved.membership)

    def test_unassigned_are_sub_cutoff_communities(self):
        #  triangle + far pair + isolated-ish tail: force a singleton with high cutoff
        graph = graph_from_edges(("a", "b"), ("b", "c"), ("a", "c"), ("x", "y"))
        assignment = louvain(graph, seed=2, min_community_size=3)
        assert assignment.unassigned == frozenset({"x", "y"})

    def test_resolution_changes_granularity(self):
        graph = two_cliques_bridge()
        coarse = louvain(graph, resolution=0.05, seed=42)
        fine = louvain(graph, resolution=1.0, seed=42)
        assert len(set(coarse.membership.values())) <= len(set(fine.membership.values()))


class TestModularityFunction:
    def test_matches_oracle_on_random_partition(self):
        graph = random_connected_graph(random.Random(26), 15)
        rng = random.Random(0)
        membership = {u: rng.randrange(3) for u in graph.nodes}
        groups: dict[int, list[str]] = {}
        for u, c in membership.items():
            groups.setdefault(c, []).append(u)
        assert modularity(graph, membership) == pytest.approx(
            oracles.modularity_oracle(graph, list(groups.values())), abs=1e-12
        )

    def test_no_edges_is_an_error(self):
        with pytest.raises(GraphStructureError):
            modularity(SimpleGraph(["a"], []), {"a": 0})


class TestSummary:
    @pytest.fixture
    def named_corpus(self):
        records = [
            make_record(
                "p1",
                ["a1"],
                ["X", "Y", "Z", "U", "V"],
                levels={"X": 1, "Y": 1, "Z": 1, "U": 1, "V": 1},
                parents={"X": ["D1"], "Y": ["D1"], "Z": ["D2"], "U": ["D2"], "V": ["D2"]},
            ),
            make_record("p2", ["a1"], ["D1", "D2"], levels={"D1": 0, "D2": 0}),
        ]
        return corpus_from_records(records)

    def test_triangle_density_one(self, named_corpus):
        graph = graph_from_edges(("X", "Y"), ("Y", "Z"), ("X", "Z"), ("U", "V"))
        assignment = louvain(graph, seed=42)
        summary = summarize_communities(assignment, graph, named_corpus)
        triangle_row = next(row for row in summary.rows if row.size == 3)
        assert triangle_row.density == pytest.approx(1.0)

    def test_two_node_community(self, named_corpus):
        graph = graph_from_edges(("X", "Y"), ("Y", "Z"), ("X", "Z"), ("U", "V"))
        assignment = louvain(graph, seed=42)
        summary = summarize_communities(assignment, graph, named_corpus)
        pair_row = next(row for row in summary.rows if row.size == 2)
        assert pair_row.density == pytest.approx(1.0)
        assert pair_row.central_fields == ("U", "V")

    def test_hand_computed_summary(self, named_corpus):
        graph = graph_from_edges(("X", "Y"), ("Y", "Z"), ("X", "Z"), ("U", "V"))
        assignment = louvain(graph, seed=42)
        summary = summarize_communities(assignment, graph, named_corpus, discipline_cutoff=0.2)
        triangle_row = next(row for row in summary.rows if row.size == 3)
        # X, Y under D1 (2/3); Z under D2 (1/3)
        assert triangle_row.disciplines == (("D1", pytest.approx(2 / 3)), ("D2", pytest.approx(1 / 3)))
        assert triangle_row.central_fields == ("X", "Y", "Z")  # degree tie, name order

    def test_sizes_plus_unassigned_cover_graph(self):
        graph = graph_from_edges(("a", "b"), ("b", "c"), ("a", "c"), ("x", "y"))
        corpus = corpus_from_records([make_record("p", ["a1"], list(graph.nodes))])
        assignment = louvain(graph, seed=2, min_community_size=3)
        summary = summarize_communities(assignment, graph, corpus)
        assert sum(row.size for row in summary.rows) + len(summary.unassigned) == graph.n

    def test_discipline_cutoff_filters(self, named_corpus):
        graph = graph_from_edges(("X", "Y"), ("Y", "Z"), ("X", "Z"), ("U", "V"))
        assignment = louvain(graph, seed=42)
        summary = summarize_communities(assignment, graph, named_corpus, discipline_cutoff=0.5)
        triangle_row = next(row for row in summary.rows if row.size == 3)
        assert triangle_row.disciplines == (("D1", pytest.approx(2 / 3)),)
