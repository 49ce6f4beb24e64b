"""
Per-edition occupation similarity networks and cross-edition best matches.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from occnet.corpus_parser.models import EditionCorpus
from occnet.errors import GraphError
from occnet.text_similarity.embeddings import DescriptionVector, EmbeddingModel, embed_description
from occnet.text_similarity.similarity import (
    Weighting,
    cross_kernel,
    feature_matrix,
    kernel_for,
    normalize_rows,
    parse_weighting,
    row_argmax,
    upper_pairs_above,
)

logger = logging.getLogger(__name__)

DEFAULT_THRESHOLD = 0.85


@dataclass
class SimilarityGraph:
    """
    Weighted undirected occupation network.

    Edges are stored once with src < dst (node positions), sorted by (src, dst).
    """

    year: int
    nodes: List[str]
    src: np.ndarray
    dst: np.ndarray
    weight: np.ndarray
    threshold: float
    weighting: Weighting
    titles: List[str] = field(default_factory=list)
    excluded: List[str] = field(default_factory=list)
    _lookup: Optional[Dict[Tuple[int, int], float]] = field(default=None, repr=False, compare=False)

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    @property
    def edge_count(self) -> int:
        return int(self.src.shape[0])

    def edge_set(self) -> set:
        return set(zip(self.src.tolist(), self.dst.tolist()))

    def strengths(self) -> np.ndarray:
        """Node strengths k_i = sum_j w_ij."""
        k = np.zeros(self.n_nodes, dtype=np.float64)
        np.add.at(k, self.src, self.weight)
        np.add.at(k, self.dst, self.weight)
        return k

    def weight_between(self, i: int, j: int) -> float:
        """Symmetric lookup; 0.0 when no edge is stored."""
        if self._lookup is None:
            self._lookup = {(int(a), int(b)): float(w) for a, b, w in zip(self.src, self.dst, self.weight)}
        if i > j:
            i, j = j, i
        return self._lookup.get((i, j), 0.0)

    def to_dense(self) -> np.ndarray:
        adj = np.zeros((self.n_nodes, self.n_nodes), dtype=np.float64)
        adj[self.src, self.dst] = self.weight
        adj[self.dst, self.src] = self.weight
        return adj

    def with_threshold(self, threshold: float) -> "SimilarityGraph":
        """Sub-graph keeping edges with weight >= threshold (threshold must not be lower)."""
        if threshold < self.threshold:
            raise GraphError(f"cannot lower threshold {self.threshold} to {threshold} without recomputing")
        keep = self.weight >= threshold
        return SimilarityGraph(
            year=self.year,
            nodes=list(self.nodes),
            src=self.src[keep],
            dst=self.dst[keep],
            weight=self.weight[keep],
            threshold=threshold,
            weighting=self.weighting,
            titles=list(self.titles),
            excluded=list(self.excluded),
        )


def embed_corpus(
    corpus: EditionCorpus,
    model: EmbeddingModel,
    filter_stopwords: bool = True,
) -> List[DescriptionVector]:
    """Description vectors for every entry that has a description, in corpus order."""
    return [
        embed_description(corpus.description_tokens(e, filter_stopwords), model, e.entry_id)
        for e in corpus.entries
        if e.description
    ]


def build_similarity_graph(
    corpus: EditionCorpus,
    model: Optional[EmbeddingModel],
    threshold: float = DEFAULT_THRESHOLD,
    weighting=Weighting.EMBEDDING_COSINE,
    filter_stopwords: bool = True,
    jobs: int = 1,
) -> SimilarityGraph:
    """
    Materialize the thresholded similarity network of one edition.

    Args:
        corpus (EditionCorpus): Deduplicated edition.
        model (EmbeddingModel): Word vectors; required for embedding_cosine.
        threshold (float): Minimum stored weight, in [-1, 1].
        weighting (Weighting | str): embedding_cosine, tfidf_cosine or token_jaccard.
        filter_stopwords (bool): Drop stop words before similarity.
        jobs (int): Worker threads for the all-pairs kernel.

    Returns:
        SimilarityGraph: Nodes are entries with a usable representation
        (non-empty embedding, or at least one token for the token-based weightings).

    Raises:
        GraphError: Threshold outside [-1, 1], missing model or empty node set.
    """
    weighting = parse_weighting(weighting)
    if not -1.0 <= threshold <= 1.0:
        raise GraphError(f"threshold must be in [-1, 1], got {threshold}")
    if weighting == Weighting.EMBEDDING_COSINE and model is None:
        raise GraphError("embedding_cosine weighting needs an embedding model")

    nodes: List[str] = []
    titles: List[str] = []
    documents: List[List[str]] = []
    vectors: List[np.ndarray] = []
    excluded: List[str] = []

    for entry in corpus.entries:
        if not entry.description:
            continue
        tokens = corpus.description_tokens(entry, filter_stopwords)
        if weighting == Weighting.EMBEDDING_COSINE:
            dv = embed_description(tokens, model, entry.entry_id)
            if dv.is_empty:
                excluded.append(entry.entry_id)
                continue
            vectors.append(dv.vector)
        elif not tokens:
            excluded.append(entry.entry_id)
            continue
        nodes.append(entry.entry_id)
        titles.append(entry.title)
        documents.append(tokens)

    if not nodes:
        raise GraphError(f"edition {corpus.year}: no entries with a usable representation")
    if excluded:
        logger.warning("Edition %d: %d entries without coverage excluded from the graph", corpus.year, len(excluded))

    features = feature_matrix(weighting, documents, vectors)
    src, dst, weight = upper_pairs_above(kernel_for(weighting, features), len(nodes), threshold, jobs)

    graph = SimilarityGraph(
        year=corpus.year,
        nodes=nodes,
        src=src,
        dst=dst,
        weight=weight,
        threshold=threshold,
        weighting=weighting,
        titles=titles,
        excluded=excluded,
    )
    logger.info(
        "Edition %d graph: %d nodes, %d edges (%s >= %.3f)",
        corpus.year, graph.n_nodes, graph.edge_count, weighting.value, threshold,
    )
    return graph


@dataclass
class CrossSimilarity:
    """Best match in another edition for every focal entry."""

    focal_year: int
    other_year: int
    matches: Dict[str, Tuple[str, float]]
    skipped: List[str] = field(default_factory=list)

    @property
    def mean_max_similarity(self) -> float:
        if not self.matches:
            return float("nan")
        return float(np.mean([sim for _, sim in self.matches.values()]))


def max_cross_similarity(
    focal: EditionCorpus,
    other: EditionCorpus,
    model: EmbeddingModel,
    filter_stopwords: bool = True,
    jobs: int = 1,
) -> CrossSimilarity:
    """
    For each focal entry, the most similar entry of `other` and that similarity.

    Self matches are allowed (other may be focal). Focal entries without an
    embedding are skipped and listed.

    Raises:
        GraphError: If `other` has no embeddable entry.
    """
    other_vectors = [v for v in embed_corpus(other, model, filter_stopwords) if not v.is_empty]
    if not other_vectors:
        raise GraphError(f"edition {other.year}: no embeddable entries to compare against")
    focal_vectors = embed_corpus(focal, model, filter_stopwords)
    skipped = [v.entry_id for v in focal_vectors if v.is_empty]
    focal_vectors = [v for v in focal_vectors if not v.is_empty]

    matches: Dict[str, Tuple[str, float]] = {}
    if focal_vectors:
        left = normalize_rows(np.vstack([v.vector for v in focal_vectors]))
        right = normalize_rows(np.vstack([v.vector for v in other_vectors]))
        best, values = row_argmax(cross_kernel(left, right), len(focal_vectors), jobs)
        for v, b, s in zip(focal_vectors, best.tolist(), values.tolist()):
            matches[v.entry_id] = (other_vectors[b].entry_id, float(s))

    result = CrossSimilarity(focal.year, other.year, matches, skipped)
    logger.info(
        "Max similarity %d -> %d: mean %.4f over %d entries",
        focal.year, other.year, result.mean_max_similarity, len(matches),
    )
    return result
