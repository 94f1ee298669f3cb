from __future__ import annotations

import random

import pytest

from fosnet import SplitRule, build_temporal, corpus_from_records, restrict_post_field, top_k_edges
from fosnet.errors import CapabilityError, ConfigError, SplitError, UnknownFieldError

import oracles
from conftest import make_record, random_corpus

YEAR_SPLIT = SplitRule.year((2016, 2018), (2019, 2019))

# hand-enumerated weights for the 10-paper fixture, pre 2016-2018 / post 2019
FIXTURE_TEMPORAL = {
    ("d_cs", "d_cs"): 1,
    ("d_cs", "d_med"): 1,
    ("d_cs", "s_epi"): 2,
    ("d_cs", "s_ml"): 1,
    ("d_med", "d_cs"): 2,
    ("d_med", "d_med"): 1,
    ("d_med", "s_epi"): 2,
    ("d_med", "s_ml"): 2,
    ("s_epi", "d_cs"): 2,
    ("s_epi", "d_med"): 1,
    ("s_epi", "s_epi"): 2,
    ("s_epi", "s_ml"): 2,
    ("s_ml", "d_cs"): 1,
    ("s_ml", "d_med"): 1,
    ("s_ml", "s_epi"): 1,
}


class TestSplitRule:
    def test_overlapping_windows_rejected(self):
        with pytest.raises(SplitError, match="overlap"):
            SplitRule.year((2016, 2019), (2019, 2020))

    def test_reversed_year_split_is_valid(self):
        reversed_split = YEAR_SPLIT.reversed()
        assert reversed_split.pre_window == (2019, 2019)
        assert reversed_split.post_window == (2016, 2018)

    def test_focal_split_sides(self):
        split = SplitRule.focal()
        focal_paper = corpus_from_records([make_record("p", ["a"], ["X"], focal=True)]).papers["p"]
        assert split.side(focal_paper) == "post"

    def test_year_outside_both_windows_is_ignored(self):
        paper = corpus_from_records([make_record("p", ["a"], ["X"], year=2030)]).papers["p"]
        assert YEAR_SPLIT.side(paper) is None


class TestBuildTemporal:
    def test_single_crossing_author(self):
        records = [
            make_record("pre", ["a"], ["X"], year=2017),
            make_record("post", ["a"], ["Y"], year=2019),
        ]
        corpus = corpus_from_records(records)
        graph = build_temporal(corpus, YEAR_SPLIT)
        assert graph.edge_weights() == {("X", "Y"): 1}

    def test_pre_only_author_contributes_nothing(self):
        corpus = corpus_from_records([make_record("pre", ["a"], ["X", "Y"], year=2017)])
        graph = build_temporal(corpus, YEAR_SPLIT)
        assert graph.edge_weights() == {}
        assert graph.pre_nodes == ("X", "Y")

    def test_self_transition_allowed(self):
        records = [
            make_record("pre", ["a"], ["X"], year=2017),
            make_record("post", ["a"], ["X"], year=2019),
        ]
        corpus = corpus_from_records(records)
        graph = build_temporal(corpus, YEAR_SPLIT)
        assert graph.edge_weights() == {("X", "X"): 1}

    def test_fixture_weights(self, fixture_corpus):
        graph = build_temporal(fixture_corpus, YEAR_SPLIT)
        assert graph.edge_weights() == FIXTURE_TEMPORAL

    def test_fixture_focal_split_matches_year_split(self, fixture_corpus):
        # in the fixture, focal papers are exactly the 2019 papers
        by_year = build_temporal(fixture_corpus, YEAR_SPLIT)
        by_focal = build_temporal(fixture_corpus, SplitRule.focal())
        assert by_year.edge_weights() == by_focal.edge_weights()

    @pytest.mark.parametrize("seed", range(10))
    def test_oracle_equivalence_random(self, seed):
        rng = random.Random(2000 + seed)
        corpus = random_corpus(rng)
        split = SplitRule.focal()
        graph = build_temporal(corpus, split)
        expected = oracles.temporal_oracle(corpus, split)
        assert {pair: len(a) for pair, a in expected.items()} == graph.edge_weights()
        for pair, authors in expected.items():
            assert {w.author for w in graph.edges[pair].witnesses} == authors

    def test_reversed_split_transposes_edges(self, fixture_corpus):
        forward = build_temporal(fixture_corpus, YEAR_SPLIT)
        backward = build_temporal(fixture_corpus, YEAR_SPLIT.reversed())
        assert backward.edge_weights() == {
            (dst, src): w for (src, dst), w in forward.edge_weights().items()
        }

    def test_workers_bit_identical(self, fixture_corpus):
        sequential = build_temporal(fixture_corpus, YEAR_SPLIT, workers=1)
        for workers in (2, 4):
            assert build_temporal(fixture_corpus, YEAR_SPLIT, workers=workers) == sequential

    def test_witness_counts_match_weights(self, fixture_corpus):
        graph = build_temporal(fixture_corpus, YEAR_SPLIT)
        for data in graph.edges.values():
            assert len(data.witnesses) == data.weight


class TestTopK:
    def test_k_at_least_edge_count_is_identity(self, fixture_corpus):
        graph = build_temporal(fixture_corpus, YEAR_SPLIT)
        assert top_k_edges(graph, graph.m) == graph
        assert top_k_edges(graph, graph.m + 10) == graph

    def test_k1_takes_heaviest(self):
        records = [
            make_record("pre1", ["a1", "a2", "a3", "a4", "a5"], ["X"], year=2017),
            make_record("post1", ["a1", "a2", "a3", "a4", "a5"], ["Y"], year=2019),
            make_record("pre2", ["b1", "b2", "b3"], ["U"], year=2017),
            make_record("post2", ["b1", "b2", "b3"], ["V"], year=2019),
        ]
        corpus = corpus_from_records(records)
        graph = build_temporal(corpus, YEAR_SPLIT)
        assert graph.edge_weights() == {("X", "Y"): 5, ("U", "V"): 3}
        top = top_k_edges(graph, 1)
        assert top.edge_weights() == {("X", "Y"): 5}
        assert top.pre_nodes == ("X",)
        assert top.post_nodes == ("Y",)

    def test_tie_break_deterministic(self, fixture_corpus):
        graph = build_temporal(fixture_corpus, YEAR_SPLIT)
        top = top_k_edges(graph, 3)
        # seven weight-2 edges tie; (weight desc, src asc, dst asc) picks these
        assert set(top.edges) == {("d_cs", "s_epi"), ("d_med", "d_cs"), ("d_med", "s_epi")}

    def test_subset_with_untouched_weights(self, fixture_corpus):
        graph = build_temporal(fixture_corpus, YEAR_SPLIT)
        top = top_k_edges(graph, 5)
        assert set(top.edges) <= set(graph.edges)
        for pair, data in top.edges.items():
            assert data == graph.edges[pair]

    def test_k_must_be_positive(self, fixture_corpus):
        graph = build_temporal(fixture_corpus, YEAR_SPLIT)
        with pytest.raises(ConfigError):
            top_k_edges(graph, 0)


class TestRestrictPostField:
    def test_unknown_field(self, fixture_corpus):
        graph = build_temporal(fixture_corpus, YEAR_SPLIT)
        with pytest.raises(UnknownFieldError):
            restrict_post_field(graph, "nope")

    def test_no_incident_edges_gives_empty_graph(self):
        records = [
            make_record("pre", ["a"], ["X"], year=2017),
            make_record("post", ["a"], ["Y"], year=2019),
            make_record("lonely", ["b"], ["Z"], year=2019),
        ]
        corpus = corpus_from_records(records)
        graph = build_temporal(corpus, YEAR_SPLIT)
        out = restrict_post_field(graph, "Z", mode="endpoint")
        assert out.edge_weights() == {}

    def test_endpoint_mode_fixture(self, fixture_corpus):
        graph = build_temporal(fixture_corpus, YEAR_SPLIT)
        out = restrict_post_field(graph, "d_med", mode="endpoint")
        expected = {pair: w for pair, w in FIXTURE_TEMPORAL.items() if pair[1] == "d_med"}
        assert out.edge_weights() == expected

    def test_witness_mode_is_superset_of_endpoint(self, fixture_corpus):
        graph = build_temporal(fixture_corpus, YEAR_SPLIT)
        endpoint = restrict_post_field(graph, "d_med", mode="endpoint")
        witness = restrict_post_field(graph, "d_med", mode="witness")
        assert set(endpoint.edges) <= set(witness.edges)

    def test_witness_mode_fixture(self, fixture_corpus):
        graph = build_temporal(fixture_corpus, YEAR_SPLIT)
        out = restrict_post_field(graph, "d_med", mode="witness")
        # post-period d_med authors are a2 (p10) and a5 (p08, p10)
        anchored = {"a2", "a5"}
        expected = {
            pair
            for pair, data in graph.edges.items()
            if {w.author for w in data.witnesses} & anchored
        }
        assert set(out.edges) == expected

    def test_witness_mode_needs_witnesses(self, fixture_corpus):
        graph = build_temporal(fixture_corpus, YEAR_SPLIT, retain_witnesses=False)
        with pytest.raises(CapabilityError):
            restrict_post_field(graph, "d_med", mode="witness")
