"""Weighted keyword co-occurrence graphs.

One graph per time bucket: vertices are the bucket's top-K keywords, the
weight of edge {i, j} counts how many tweets contain both keywords. A
tweet contributes at most 1 per pair no matter how often a word repeats
inside it. Top-K keywords that never co-occur stay in the graph as
isolated vertices; sparse months owe their inflated community counts to
exactly those vertices and to tiny disconnected components.
"""

import csv
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .lexicon import KeywordFrequency, KeywordSet, StopWordList, remove_stopwords, tokenize

__all__ = [
    "KeywordGraph",
    "build_graph",
    "isolated_vertices",
    "connected_components",
    "graph_from_edges",
    "write_edges_csv",
    "write_vertices_csv",
    "write_matrix_csv",
    "read_edges_csv",
]


@dataclass(frozen=True)
class KeywordGraph:
    """Undirected weighted graph over a bucket's keywords.

    weights is a symmetric nonnegative integer matrix with zero diagonal;
    strengths (k_i) and the total edge weight m are always derived from it.
    """

    vertices: tuple[str, ...]
    weights: np.ndarray
    bucket: object = None

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=np.int64)
        n = len(self.vertices)
        if w.shape != (n, n):
            raise ValueError(f"weight matrix shape {w.shape} does not match {n} vertices")
        if (w < 0).any():
            raise ValueError("negative edge weight")
        if (w != w.T).any():
            raise ValueError("weight matrix not symmetric")
        if np.diagonal(w).any():
            raise ValueError("nonzero diagonal")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def strengths(self) -> np.ndarray:
        """k_i: summed weight of edges incident to each vertex."""
        return self.weights.sum(axis=1)

    @property
    def total_weight(self) -> int:
        """m: sum of all edge weights."""
        return int(self.weights.sum()) // 2

    def edges(self):
        """Unordered positive-weight pairs in vertex index order."""
        rows, cols = np.nonzero(np.triu(self.weights))
        for i, j in zip(rows.tolist(), cols.tolist()):
            yield self.vertices[i], self.vertices[j], int(self.weights[i, j])


def build_graph(bucket, keywords: KeywordSet, sw: StopWordList, key=None) -> KeywordGraph:
    """Co-occurrence graph of one bucket restricted to the given keywords.

    For each tweet, every unordered pair of distinct keywords present in
    it gains weight 1 (presence, not multiplicity). An empty bucket gives
    an all-zero matrix.
    """
    index = keywords.index()
    n = len(keywords)
    weights = np.zeros((n, n), dtype=np.int64)
    for tweet in bucket:
        present = {index[t] for t in remove_stopwords(tokenize(tweet.text), sw) if t in index}
        for i, j in combinations(sorted(present), 2):
            weights[i, j] += 1
            weights[j, i] += 1
    return KeywordGraph(vertices=tuple(keywords), weights=weights, bucket=key)


def isolated_vertices(g: KeywordGraph) -> list[str]:
    """Keywords with zero strength."""
    k = g.strengths
    return [g.vertices[i] for i in range(g.n) if k[i] == 0]


def connected_components(g: KeywordGraph) -> list[list[str]]:
    """Components in vertex index order (isolated vertices are singletons)."""
    seen = [False] * g.n
    comps = []
    for start in range(g.n):
        if seen[start]:
            continue
        stack = [start]
        seen[start] = True
        comp = []
        while stack:
            v = stack.pop()
            comp.append(v)
            for u in np.nonzero(g.weights[v])[0].tolist():
                if not seen[u]:
                    seen[u] = True
                    stack.append(u)
        comps.append([g.vertices[i] for i in sorted(comp)])
    return comps


def graph_from_edges(edges, vertices=None, bucket=None) -> KeywordGraph:
    """Build a KeywordGraph from (source, target, weight) triples.

    Vertex order defaults to first appearance in the edge list; pass an
    explicit vertex sequence to keep isolated vertices.
    """
    if vertices is None:
        order = []
        seen = set()
        for a, b, _ in edges:
            for v in (a, b):
                if v not in seen:
                    seen.add(v)
                    order.append(v)
        vertices = order
    vertices = tuple(vertices)
    idx = {v: i for i, v in enumerate(vertices)}
    weights = np.zeros((len(vertices), len(vertices)), dtype=np.int64)
    for a, b, w in edges:
        if a == b:
            raise ValueError(f"self-loop on {a!r}")
        i, j = idx[a], idx[b]
        weights[i, j] += int(w)
        weights[j, i] += int(w)
    return KeywordGraph(vertices=vertices, weights=weights, bucket=bucket)


def write_edges_csv(g: KeywordGraph, path) -> None:
    """Edge list CSV: header source,target,weight; keywords quoted."""
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, quoting=csv.QUOTE_NONNUMERIC, lineterminator="\n")
        writer.writerow(["source", "target", "weight"])
        for a, b, w in g.edges():
            writer.writerow([a, b, w])


def write_vertices_csv(g: KeywordGraph, freq: KeywordFrequency, path) -> None:
    """Vertex list CSV: keyword,frequency,strength in vertex index order."""
    k = g.strengths
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, quoting=csv.QUOTE_NONNUMERIC, lineterminator="\n")
        writer.writerow(["keyword", "frequency", "strength"])
        for i, v in enumerate(g.vertices):
            writer.writerow([v, int(freq.counts.get(v, 0)), int(k[i])])


def write_matrix_csv(g: KeywordGraph, path) -> None:
    """Full adjacency matrix CSV: first column and header are keywords."""
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(["keyword", *g.vertices])
        for i, v in enumerate(g.vertices):
            writer.writerow([v, *g.weights[i].tolist()])


def read_edges_csv(path, vertices=None) -> KeywordGraph:
    """Read an edge list CSV written by write_edges_csv."""
    edges = []
    with open(path, "r", encoding="utf-8", newline="") as f:
        reader = csv.reader(f)
        header = next(reader, None)
        if header is None or [h.strip() for h in header[:3]] != ["source", "target", "weight"]:
            raise ValueError("edge CSV must start with header source,target,weight")
        for row in reader:
            if not row:
                continue
            edges.append((row[0], row[1], int(float(row[2]))))
    return graph_from_edges(edges, vertices=vertices)
