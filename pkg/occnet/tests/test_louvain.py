import itertools

import numpy as np
import pytest

from occnet.errors import GraphError
from occnet.polarization.louvain import louvain_communities, partition_agreement
from occnet.polarization.modularity import community_modularity
from occnet.synthetic import planted_block_graph
from occnet.text_similarity.graph import SimilarityGraph
from occnet.text_similarity.similarity import Weighting


def small_graph(edges, n):
    edges = sorted(edges)
    return SimilarityGraph(
        year=1939,
        nodes=[f"n{i}" for i in range(n)],
        src=np.array([e[0] for e in edges], dtype=np.int64),
        dst=np.array([e[1] for e in edges], dtype=np.int64),
        weight=np.array([e[2] for e in edges], dtype=np.float64),
        threshold=-1.0,
        weighting=Weighting.EMBEDDING_COSINE,
    )


BRIDGED_TRIANGLES = [(0, 1, 1.0), (0, 2, 1.0), (1, 2, 1.0), (2, 3, 1.0), (3, 4, 1.0), (3, 5, 1.0), (4, 5, 1.0)]


def test_bridged_triangles_split_at_the_bridge():
    result = louvain_communities(small_graph(BRIDGED_TRIANGLES, 6))
    assert result.n_modules == 2
    assert result.module_sizes == [3, 3]
    assert result.partition["n0"] == result.partition["n2"] != result.partition["n3"]
    assert result.modularity == pytest.approx(6 / 7 - 0.5, abs=1e-12)


def test_complete_graph_is_one_community():
    edges = [(i, j, 1.0) for i, j in itertools.combinations(range(5), 2)]
    result = louvain_communities(small_graph(edges, 5))
    assert result.n_modules == 1
    assert result.module_sizes == [5]
    assert result.modularity == pytest.approx(0.0, abs=1e-12)


def test_matches_the_exhaustive_optimum():
    graph = small_graph(BRIDGED_TRIANGLES, 6)
    best = max(
        community_modularity(6, graph.src, graph.dst, graph.weight, np.array(assignment))
        for assignment in itertools.product(range(3), repeat=6)
    )
    assert louvain_communities(graph).modularity == pytest.approx(best, abs=1e-12)


def test_planted_blocks_are_recovered():
    graph, blocks = planted_block_graph(n_blocks=4, block_size=25, seed=3)
    result = louvain_communities(graph, labels=blocks, seed=0)
    assert result.label_agreement >= 0.95
    assert result.label_sizes == {"0": 25, "1": 25, "2": 25, "3": 25}
    assert sum(result.module_sizes) == 100
    assert sum(result.size_histogram.values()) == result.n_modules


def test_seed_fixes_the_partition():
    graph, _ = planted_block_graph(seed=8)
    assert louvain_communities(graph, seed=4).partition == louvain_communities(graph, seed=4).partition


def test_negative_weights_are_ignored():
    graph = small_graph(BRIDGED_TRIANGLES + [(0, 5, -0.4)], 6)
    assert louvain_communities(graph).modularity == pytest.approx(6 / 7 - 0.5, abs=1e-12)


def test_graph_without_positive_edges_is_an_error():
    with pytest.raises(GraphError):
        louvain_communities(small_graph([(0, 1, -0.2)], 3))


def test_agreement_uses_the_best_relabeling():
    truth = {"a": "x", "b": "x", "c": "y", "d": "y"}
    assert partition_agreement({"a": 1, "b": 1, "c": 0, "d": 0}, truth) == 1.0
    assert partition_agreement({"a": 0, "b": 1, "c": 1, "d": 1}, truth) == 0.75
