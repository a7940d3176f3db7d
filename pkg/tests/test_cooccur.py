"""Co-occurrence graph construction and exports.

Hand count for the shipped 10-tweet fixture (keyword sets per tweet):
  t01 {stay,safe,home}  t02 {covid-19,stay,home,safe}  t03 {plan,economy,jobs}
  t04 {jobs}            t05 {plan,economy}             t06 {covid-19,health}
  t07 {health,home}     t08 {stay,safe,home}           t09 {jobs,economy}
  t10 {health,plan}
Pair tallies: stay-safe 3, stay-home 3, safe-home 3, covid-19 x {stay,home,safe} 1,
plan-economy 2, economy-jobs 2, plan-jobs 1, covid-19-health 1, health-home 1,
health-plan 1; total m = 20. Frequencies: jobs 5, stay 5, home 4, economy 3,
health 3, plan 3, safe 3, covid-19 2.
"""

import itertools
from datetime import datetime, timezone

import numpy as np
import pytest

from kwnet.cooccur import (
    KeywordGraph,
    build_graph,
    connected_components,
    graph_from_edges,
    isolated_vertices,
    read_edges_csv,
    write_edges_csv,
    write_matrix_csv,
    write_vertices_csv,
)
from kwnet.corpus import Corpus, Tweet
from kwnet.lexicon import KeywordFrequency, KeywordSet, default_stopwords, tokenize, remove_stopwords

FIXTURE_VERTICES = ("jobs", "stay", "home", "economy", "health", "plan", "safe", "covid-19")
FIXTURE_MATRIX = np.array(
    [
        [0, 0, 0, 2, 0, 1, 0, 0],
        [0, 0, 3, 0, 0, 0, 3, 1],
        [0, 3, 0, 0, 1, 0, 3, 1],
        [2, 0, 0, 0, 0, 2, 0, 0],
        [0, 0, 1, 0, 0, 1, 0, 1],
        [1, 0, 0, 2, 1, 0, 0, 0],
        [0, 3, 3, 0, 0, 0, 0, 1],
        [0, 1, 1, 0, 1, 0, 1, 0],
    ],
    dtype=np.int64,
)


def bucket_of(texts):
    tweets = [
        Tweet(id=f"{i:03d}", created_at=datetime(2020, 3, 1, i % 24, tzinfo=timezone.utc),
              text=t, lang="en")
        for i, t in enumerate(texts)
    ]
    return Corpus.build(tweets, source="test")


def keywords_of(words):
    return KeywordSet(words=tuple(words), k=max(100, len(words)))


class TestFixtureGraph:
    def test_vertex_order(self, fixture_graph):
        g, freq = fixture_graph
        assert g.vertices == FIXTURE_VERTICES
        assert freq.counts == {"jobs": 5, "stay": 5, "home": 4, "economy": 3,
                               "health": 3, "plan": 3, "safe": 3, "covid-19": 2}

    def test_matrix_matches_hand_count(self, fixture_graph):
        g, _ = fixture_graph
        assert np.array_equal(np.asarray(g.weights), FIXTURE_MATRIX)
        assert g.total_weight == 20

    def test_matrix_csv_byte_identical(self, fixture_graph, fixture_matrix_path, tmp_path):
        g, _ = fixture_graph
        out = tmp_path / "matrix.csv"
        write_matrix_csv(g, out)
        assert out.read_bytes() == fixture_matrix_path.read_bytes()

    def test_total_weight_matches_pair_recount(self, fixture_corpus, fixture_graph):
        g, _ = fixture_graph
        sw = default_stopwords()
        members = set(g.vertices)
        incidences = 0
        for tweet in fixture_corpus:
            present = {t for t in remove_stopwords(tokenize(tweet.text), sw) if t in members}
            incidences += len(present) * (len(present) - 1) // 2
        assert g.total_weight == incidences


class TestBuildRules:
    def test_single_tweet_pair(self):
        bucket = bucket_of(["stay safe from covid-19"])
        g = build_graph(bucket, keywords_of(["covid-19", "safe"]), default_stopwords())
        i, j = g.vertices.index("covid-19"), g.vertices.index("safe")
        assert g.weights[i, j] == 1

    def test_three_keywords_full_clique(self):
        bucket = bucket_of(["alpha beta gamma"])
        g = build_graph(bucket, keywords_of(["alpha", "beta", "gamma"]), default_stopwords())
        assert np.array_equal(np.asarray(g.weights), np.ones((3, 3), dtype=np.int64) - np.eye(3, dtype=np.int64))

    def test_repeats_count_once_per_tweet(self):
        bucket = bucket_of(["jobs jobs plan"])
        g = build_graph(bucket, keywords_of(["jobs", "plan"]), default_stopwords())
        i, j = g.vertices.index("jobs"), g.vertices.index("plan")
        assert g.weights[i, j] == 1
        assert g.weights[i, i] == 0

    def test_two_tweets_accumulate(self):
        bucket = bucket_of(["alpha beta now", "alpha beta again"])
        g = build_graph(bucket, keywords_of(["alpha", "beta"]), default_stopwords())
        assert g.weights[0, 1] == 2

    def test_non_member_keywords_ignored(self):
        bucket = bucket_of(["alpha beta gamma"])
        g = build_graph(bucket, keywords_of(["alpha", "beta"]), default_stopwords())
        assert g.weights[0, 1] == 1
        assert g.n == 2

    def test_empty_bucket_zero_matrix(self):
        g = build_graph(bucket_of([]), keywords_of(["a1", "b2"]), default_stopwords())
        assert not g.weights.any()

    def test_tweet_order_irrelevant(self):
        texts = ["alpha beta", "beta gamma", "alpha gamma delta", "delta alpha"]
        ks = keywords_of(["alpha", "beta", "delta", "gamma"])
        sw = default_stopwords()
        g1 = build_graph(bucket_of(texts), ks, sw)
        g2 = build_graph(bucket_of(list(reversed(texts))), ks, sw)
        assert np.array_equal(np.asarray(g1.weights), np.asarray(g2.weights))

    def test_single_keyword_tweets_contribute_nothing(self):
        texts = ["alpha beta", "gamma", "gamma", "beta alpha"]
        ks = keywords_of(["alpha", "beta", "gamma"])
        sw = default_stopwords()
        g_all = build_graph(bucket_of(texts), ks, sw)
        g_pairs = build_graph(bucket_of([t for t in texts if len(t.split()) >= 2]), ks, sw)
        assert np.array_equal(np.asarray(g_all.weights), np.asarray(g_pairs.weights))


class TestIsolates:
    def test_all_isolated(self):
        g = KeywordGraph(vertices=("a", "b", "c"), weights=np.zeros((3, 3), dtype=np.int64))
        assert isolated_vertices(g) == ["a", "b", "c"]

    def test_one_isolated(self):
        g = graph_from_edges([("a", "b", 1)], vertices=("a", "b", "c"))
        assert isolated_vertices(g) == ["c"]

    def test_triangle_none(self):
        g = graph_from_edges([("a", "b", 1), ("b", "c", 1), ("a", "c", 1)])
        assert isolated_vertices(g) == []

    def test_components(self):
        g = graph_from_edges([("a", "b", 1), ("c", "d", 2)], vertices=("a", "b", "c", "d", "e"))
        assert connected_components(g) == [["a", "b"], ["c", "d"], ["e"]]


class TestGraphType:
    def test_asymmetric_rejected(self):
        w = np.zeros((2, 2), dtype=np.int64)
        w[0, 1] = 1
        with pytest.raises(ValueError, match="symmetric"):
            KeywordGraph(vertices=("a", "b"), weights=w)

    def test_nonzero_diagonal_rejected(self):
        w = np.eye(2, dtype=np.int64)
        with pytest.raises(ValueError, match="diagonal"):
            KeywordGraph(vertices=("a", "b"), weights=w)

    def test_negative_weight_rejected(self):
        w = np.array([[0, -1], [-1, 0]], dtype=np.int64)
        with pytest.raises(ValueError, match="negative"):
            KeywordGraph(vertices=("a", "b"), weights=w)

    def test_strengths_and_total(self, fixture_graph):
        g, _ = fixture_graph
        k = g.strengths
        assert k.sum() == 2 * g.total_weight
        assert np.array_equal(k, np.asarray(g.weights).sum(axis=1))

    def test_self_loop_edge_rejected(self):
        with pytest.raises(ValueError, match="self-loop"):
            graph_from_edges([("a", "a", 1)])


class TestCsvExports:
    def test_edges_round_trip(self, fixture_graph, tmp_path):
        g, _ = fixture_graph
        path = tmp_path / "edges.csv"
        write_edges_csv(g, path)
        g2 = read_edges_csv(path, vertices=g.vertices)
        assert np.array_equal(np.asarray(g.weights), np.asarray(g2.weights))

    def test_edges_csv_quotes_keywords(self, tmp_path):
        g = graph_from_edges([("covid-19", "safe", 2)])
        path = tmp_path / "edges.csv"
        write_edges_csv(g, path)
        lines = path.read_text().splitlines()
        assert lines[0] == '"source","target","weight"'
        assert lines[1] == '"covid-19","safe",2'

    def test_vertices_csv(self, fixture_graph, tmp_path):
        g, freq = fixture_graph
        path = tmp_path / "vertices.csv"
        write_vertices_csv(g, freq, path)
        lines = path.read_text().splitlines()
        assert lines[0] == '"keyword","frequency","strength"'
        assert lines[1] == '"jobs",5,3'
        assert len(lines) == 1 + g.n

    def test_read_edges_header_check(self, tmp_path):
        path = tmp_path / "e.csv"
        path.write_text("from,to,w\na,b,1\n")
        with pytest.raises(ValueError, match="source,target,weight"):
            read_edges_csv(path)
