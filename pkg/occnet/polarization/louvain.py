"""
Louvain community structure of a similarity graph, compared with the class labels.
"""

import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, Hashable, List, Mapping, Optional

import community as community_louvain
import networkx as nx
import numpy as np
from scipy.optimize import linear_sum_assignment

from occnet.errors import GraphError
from occnet.polarization.modularity import community_modularity
from occnet.text_similarity.graph import SimilarityGraph

logger = logging.getLogger(__name__)


@dataclass
class LouvainResult:
    partition: Dict[str, int]
    modularity: float
    module_sizes: List[int]
    size_histogram: Dict[int, int]
    label_sizes: Dict[str, int] = field(default_factory=dict)
    label_agreement: Optional[float] = None

    @property
    def n_modules(self) -> int:
        return len(self.module_sizes)

    def to_dict(self) -> Dict:
        return {
            "modularity": self.modularity,
            "n_modules": self.n_modules,
            "module_sizes": self.module_sizes,
            "size_histogram": {str(k): v for k, v in sorted(self.size_histogram.items())},
            "label_sizes": self.label_sizes,
            "label_agreement": self.label_agreement,
            "partition": self.partition,
        }


def to_networkx(graph: SimilarityGraph, positive_only: bool = True) -> nx.Graph:
    """Undirected networkx graph over node ids; non-positive weights are dropped by default."""
    G = nx.Graph()
    G.add_nodes_from(graph.nodes)
    for s, d, w in zip(graph.src.tolist(), graph.dst.tolist(), graph.weight.tolist()):
        if positive_only and w <= 0:
            continue
        G.add_edge(graph.nodes[s], graph.nodes[d], weight=w)
    return G


def _name(value) -> str:
    return value.value if hasattr(value, "value") else str(value)


def partition_agreement(found: Mapping[str, Hashable], truth: Mapping[str, Hashable]) -> float:
    """
    Share of nodes whose community matches their reference group after the
    best one-to-one relabeling (Hungarian matching on the contingency table).
    """
    nodes = [n for n in truth if n in found]
    if not nodes:
        return float("nan")
    found_keys = sorted({found[n] for n in nodes}, key=str)
    truth_keys = sorted({truth[n] for n in nodes}, key=str)
    fi = {k: i for i, k in enumerate(found_keys)}
    ti = {k: i for i, k in enumerate(truth_keys)}
    table = np.zeros((len(found_keys), len(truth_keys)), dtype=np.int64)
    for n in nodes:
        table[fi[found[n]], ti[truth[n]]] += 1
    rows, cols = linear_sum_assignment(-table)
    return float(table[rows, cols].sum()) / len(nodes)


def louvain_communities(
    graph: SimilarityGraph,
    labels: Optional[Mapping[str, Hashable]] = None,
    seed: int = 0,
) -> LouvainResult:
    """
    Greedy two-phase Louvain optimisation of weighted modularity.

    Components are handled independently by the optimiser. Negative weights are
    not used.

    Args:
        graph (SimilarityGraph): Network to partition.
        labels (dict, optional): Class per node, for size and agreement comparison.
        seed (int): Random state of the node visiting order.

    Returns:
        LouvainResult: Partition, its modularity and the module-size histogram.

    Raises:
        GraphError: Empty graph or no positive edge weight.
    """
    if graph.n_nodes == 0:
        raise GraphError("empty graph")
    G = to_networkx(graph)
    if G.number_of_edges() == 0:
        raise GraphError(f"graph of edition {graph.year} has no positive edges to partition")

    raw = community_louvain.best_partition(G, weight="weight", random_state=seed)
    # Renumber modules by first appearance in node order.
    renumber: Dict[int, int] = {}
    partition = {node: renumber.setdefault(raw[node], len(renumber)) for node in graph.nodes}

    keep = graph.weight > 0
    community = np.array([partition[node] for node in graph.nodes], dtype=np.int64)
    q = community_modularity(graph.n_nodes, graph.src[keep], graph.dst[keep], graph.weight[keep], community)
    sizes = Counter(partition.values())
    module_sizes = sorted(sizes.values(), reverse=True)

    result = LouvainResult(
        partition=partition,
        modularity=q,
        module_sizes=module_sizes,
        size_histogram=dict(Counter(module_sizes)),
    )
    if labels is not None:
        named = {n: _name(labels[n]) for n in graph.nodes if n in labels}
        result.label_sizes = dict(sorted(Counter(named.values()).items()))
        result.label_agreement = partition_agreement(partition, named)
    logger.info("Louvain on edition %d: %d modules, Q=%.5f", graph.year, result.n_modules, q)
    return result
