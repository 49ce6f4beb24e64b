"""
Fixed-partition modularity of a labeled similarity graph.

Q = (1/2m) sum_ij [A_ij - k_i k_j / 2m] delta(c_i, c_j), with k_i the node
strength and m the total edge weight (each undirected edge counted once). Over
classes this is Q = sum_c [ W_c / m - (S_c / 2m)^2 ], where W_c is the weight of
edges inside class c and S_c the summed strength of its nodes.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Dict, Hashable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from occnet.errors import GraphError, LabelError
from occnet.job_classifier.labels import CLASS_ORDER, Label, parse_label
from occnet.text_similarity.graph import SimilarityGraph


class EdgeMode(str, Enum):
    WEIGHTED = "weighted"
    BINARY = "binary"


def parse_edge_mode(value) -> EdgeMode:
    try:
        return EdgeMode(value)
    except ValueError as e:
        raise GraphError(f"unknown edge mode '{value}' (expected weighted or binary)") from e


@dataclass
class ModularityInput:
    """
    A graph together with one class per node.

    Raises:
        LabelError: A graph node has no label (missing ids are listed).
        GraphError: The graph has no nodes or no positive total edge weight.
    """

    graph: SimilarityGraph
    labels: Mapping[str, Label]
    edge_mode: EdgeMode = EdgeMode.WEIGHTED

    def __post_init__(self):
        self.edge_mode = parse_edge_mode(self.edge_mode)
        if self.graph.n_nodes == 0:
            raise GraphError("empty graph")
        missing = [node for node in self.graph.nodes if node not in self.labels]
        if missing:
            preview = missing[:20]
            raise LabelError(f"{len(missing)} graph nodes have no label: {preview}")
        self.labels = {node: parse_label(self.labels[node]) for node in self.graph.nodes}
        if self.m <= 0:
            raise GraphError(f"graph of edition {self.graph.year} has no positive edge weight (m = {self.m})")

    def weights(self) -> np.ndarray:
        if self.edge_mode == EdgeMode.BINARY:
            return np.ones_like(self.graph.weight)
        return self.graph.weight

    @property
    def m(self) -> float:
        return float(self.weights().sum())

    def class_index(self) -> np.ndarray:
        """Position of each node's class in CLASS_ORDER."""
        return np.array([CLASS_ORDER.index(self.labels[node]) for node in self.graph.nodes], dtype=np.int64)

    @property
    def p0(self) -> float:
        """Fraction of nodes labeled Physical."""
        return float(np.mean(self.class_index() == 0))


def community_modularity(
    n_nodes: int,
    src: np.ndarray,
    dst: np.ndarray,
    weight: np.ndarray,
    community: np.ndarray,
    multiplicity: Optional[np.ndarray] = None,
) -> float:
    """
    Modularity of an integer community vector over an edge list.

    With `multiplicity`, node i stands for c_i identical copies: every copy keeps
    all incident edges of the original (copies are not linked to each other), so
    an edge contributes w_ij * c_i * c_j and a copy of i has strength sum_j w_ij c_j.
    Nodes with multiplicity 0 are absent.
    """
    if multiplicity is None:
        w = weight
        strength = np.zeros(n_nodes, dtype=np.float64)
        np.add.at(strength, src, w)
        np.add.at(strength, dst, w)
        node_total = strength
    else:
        c = multiplicity.astype(np.float64)
        w = weight * c[src] * c[dst]
        per_copy = np.zeros(n_nodes, dtype=np.float64)
        np.add.at(per_copy, src, weight * c[dst])
        np.add.at(per_copy, dst, weight * c[src])
        node_total = per_copy * c

    m = float(w.sum())
    if m <= 0:
        raise GraphError(f"modularity undefined: total edge weight {m}")

    _, community = np.unique(community, return_inverse=True)
    n_comm = int(community.max()) + 1 if community.size else 0
    inside = community[src] == community[dst]
    w_in = np.bincount(community[src][inside], weights=w[inside], minlength=n_comm)
    s_c = np.bincount(community, weights=node_total, minlength=n_comm)
    return float(np.sum(w_in / m - (s_c / (2.0 * m)) ** 2))


def modularity(data: ModularityInput) -> float:
    """
    Modularity of the class partition.

    Args:
        data (ModularityInput): Labeled graph.

    Returns:
        float: Q in [-0.5, 1].
    """
    g = data.graph
    return community_modularity(g.n_nodes, g.src, g.dst, data.weights(), data.class_index())


def partition_modularity(
    graph: SimilarityGraph,
    partition: Mapping[str, Hashable],
    edge_mode=EdgeMode.WEIGHTED,
) -> float:
    """Modularity of an arbitrary node -> community mapping."""
    edge_mode = parse_edge_mode(edge_mode)
    missing = [node for node in graph.nodes if node not in partition]
    if missing:
        raise LabelError(f"{len(missing)} graph nodes missing from the partition: {missing[:20]}")
    keys: Dict[Hashable, int] = {}
    community = np.array([keys.setdefault(partition[node], len(keys)) for node in graph.nodes], dtype=np.int64)
    weight = np.ones_like(graph.weight) if edge_mode == EdgeMode.BINARY else graph.weight
    return community_modularity(graph.n_nodes, graph.src, graph.dst, weight, community)


def modularity_bruteforce(adjacency: np.ndarray, classes: Sequence[Hashable]) -> float:
    """Literal O(n^2) double sum of the modularity definition over a dense adjacency."""
    k = adjacency.sum(axis=1)
    two_m = adjacency.sum()
    if two_m <= 0:
        raise GraphError("modularity undefined: no edges")
    total = 0.0
    n = adjacency.shape[0]
    for i in range(n):
        for j in range(n):
            if classes[i] == classes[j]:
                total += adjacency[i, j] - k[i] * k[j] / two_m
    return total / two_m


def class_sizes(data: ModularityInput) -> List[Tuple[str, int]]:
    idx = data.class_index()
    return [(label.value, int(np.sum(idx == c))) for c, label in enumerate(CLASS_ORDER)]
