"""Shared test utilities: small deterministic random graphs."""

import numpy as np

from kwnet.cooccur import KeywordGraph


def named(n):
    return tuple(f"w{i:02d}" for i in range(n))


def graph_from_matrix(mat) -> KeywordGraph:
    mat = np.asarray(mat, dtype=np.int64)
    return KeywordGraph(vertices=named(mat.shape[0]), weights=mat)


def random_graph(rng, n, edge_prob=0.5, max_weight=9) -> KeywordGraph:
    """Random symmetric integer-weight graph (possibly disconnected)."""
    weights = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < edge_prob:
                w = int(rng.integers(1, max_weight + 1))
                weights[i, j] = weights[j, i] = w
    return graph_from_matrix(weights)


def random_connected_graph(rng, n, extra_edge_prob=0.3, max_weight=9) -> KeywordGraph:
    """Random spanning tree plus extra random edges: always connected."""
    weights = np.zeros((n, n), dtype=np.int64)
    for j in range(1, n):
        i = int(rng.integers(0, j))
        w = int(rng.integers(1, max_weight + 1))
        weights[i, j] = weights[j, i] = w
    for i in range(n):
        for j in range(i + 1, n):
            if weights[i, j] == 0 and rng.random() < extra_edge_prob:
                w = int(rng.integers(1, max_weight + 1))
                weights[i, j] = weights[j, i] = w
    return graph_from_matrix(weights)
