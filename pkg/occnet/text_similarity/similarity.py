"""
Pairwise similarity measures and the blocked all-pairs kernel.

TF-IDF weighting: w(t, d) = tf(t, d) * ln(N / df(t)), with N the number of
documents in the edition and df(t) the number of documents containing t. Rows
are L2-normalized, so the dot product of two rows is their cosine.
"""

import math
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from enum import Enum
from typing import Callable, List, Sequence, Tuple

import numpy as np
import scipy.sparse as sp

from occnet.errors import GraphError

# Rows per block of the all-pairs kernel. Fixed so results do not depend on the
# number of workers.
BLOCK_ROWS = 512


class Weighting(str, Enum):
    EMBEDDING_COSINE = "embedding_cosine"
    TFIDF_COSINE = "tfidf_cosine"
    TOKEN_JACCARD = "token_jaccard"


def cosine(u: Sequence[float], v: Sequence[float]) -> float:
    """
    Cosine similarity of two non-zero vectors of equal length, clipped to [-1, 1].

    Raises:
        ValueError: On a zero vector or a length mismatch.
    """
    a = np.asarray(u, dtype=np.float64)
    b = np.asarray(v, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError(f"length mismatch: {a.shape} vs {b.shape}")
    na = np.linalg.norm(a)
    nb = np.linalg.norm(b)
    if na == 0.0 or nb == 0.0:
        raise ValueError("cosine of a zero vector is undefined")
    value = float(np.dot(a / na, b / nb))
    return min(1.0, max(-1.0, value))


def normalize_rows(matrix: np.ndarray) -> np.ndarray:
    """L2-normalize rows; zero rows stay zero."""
    norms = np.linalg.norm(matrix, axis=1)
    norms[norms == 0.0] = 1.0
    return matrix / norms[:, None]


def tfidf_matrix(documents: Sequence[Sequence[str]]) -> sp.csr_matrix:
    """
    Row-normalized TF-IDF matrix of tokenized documents.

    Columns follow the sorted vocabulary, so the matrix is deterministic. The
    idf is smoothed, ln((1 + N) / (1 + df)) + 1, so a token found in every
    document still carries weight.
    """
    vocab = sorted({t for doc in documents for t in doc})
    column = {t: i for i, t in enumerate(vocab)}
    n_docs = len(documents)
    df = Counter(t for doc in documents for t in set(doc))
    idf = np.array([math.log((1 + n_docs) / (1 + df[t])) + 1.0 for t in vocab], dtype=np.float64)

    indptr, indices, data = [0], [], []
    for doc in documents:
        counts = Counter(doc)
        cols = sorted(column[t] for t in counts)
        indices.extend(cols)
        data.extend(counts[vocab[c]] * idf[c] for c in cols)
        indptr.append(len(indices))
    matrix = sp.csr_matrix((np.asarray(data, dtype=np.float64), indices, indptr), shape=(n_docs, len(vocab)))

    norms = np.sqrt(np.asarray(matrix.multiply(matrix).sum(axis=1)).ravel())
    norms[norms == 0.0] = 1.0
    return sp.csr_matrix(sp.diags(1.0 / norms) @ matrix)


def incidence_matrix(documents: Sequence[Sequence[str]]) -> sp.csr_matrix:
    """Binary document x token matrix (token sets), columns in sorted vocabulary order."""
    vocab = sorted({t for doc in documents for t in doc})
    column = {t: i for i, t in enumerate(vocab)}
    indptr, indices = [0], []
    for doc in documents:
        indices.extend(sorted(column[t] for t in set(doc)))
        indptr.append(len(indices))
    data = np.ones(len(indices), dtype=np.float64)
    return sp.csr_matrix((data, indices, indptr), shape=(len(documents), len(vocab)))


def _dense(block) -> np.ndarray:
    return block.toarray() if sp.issparse(block) else np.asarray(block)


def cosine_block_kernel(features) -> Callable[[int, int], np.ndarray]:
    """Similarity rows [start, stop) x all rows for row-normalized features."""
    transposed = features.T

    def kernel(start: int, stop: int) -> np.ndarray:
        return _dense(features[start:stop] @ transposed)

    return kernel


def jaccard_block_kernel(incidence: sp.csr_matrix) -> Callable[[int, int], np.ndarray]:
    sizes = np.asarray(incidence.sum(axis=1)).ravel()
    transposed = incidence.T

    def kernel(start: int, stop: int) -> np.ndarray:
        inter = _dense(incidence[start:stop] @ transposed)
        union = sizes[start:stop, None] + sizes[None, :] - inter
        with np.errstate(invalid="ignore", divide="ignore"):
            out = np.where(union > 0, inter / union, 0.0)
        return out

    return kernel


def upper_pairs_above(
    kernel: Callable[[int, int], np.ndarray],
    n: int,
    threshold: float,
    jobs: int = 1,
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    All pairs i < j with similarity >= threshold, in (i, j) order.

    Blocks of BLOCK_ROWS rows are computed independently (in threads when
    jobs > 1) and concatenated in block order.

    Returns:
        tuple: (src indices, dst indices, weights)
    """
    if not -1.0 <= threshold <= 1.0:
        raise GraphError(f"threshold must be in [-1, 1], got {threshold}")

    def run(start: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        stop = min(start + BLOCK_ROWS, n)
        sims = np.clip(kernel(start, stop), -1.0, 1.0)
        rows = np.arange(start, stop)[:, None]
        cols = np.arange(n)[None, :]
        mask = (cols > rows) & (sims >= threshold)
        r, c = np.nonzero(mask)
        return r + start, c, sims[r, c]

    starts = list(range(0, n, BLOCK_ROWS))
    if jobs > 1 and len(starts) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(run, starts))
    else:
        parts = [run(s) for s in starts]

    if not parts:
        empty = np.zeros(0, dtype=np.int64)
        return empty, empty.copy(), np.zeros(0, dtype=np.float64)
    src = np.concatenate([p[0] for p in parts]).astype(np.int64)
    dst = np.concatenate([p[1] for p in parts]).astype(np.int64)
    weight = np.concatenate([p[2] for p in parts]).astype(np.float64)
    return src, dst, weight


def row_argmax(
    kernel: Callable[[int, int], np.ndarray],
    n_rows: int,
    jobs: int = 1,
) -> Tuple[np.ndarray, np.ndarray]:
    """Best column and its value for every row; ties go to the lowest column."""

    def run(start: int) -> Tuple[np.ndarray, np.ndarray]:
        stop = min(start + BLOCK_ROWS, n_rows)
        sims = np.clip(kernel(start, stop), -1.0, 1.0)
        best = np.argmax(sims, axis=1)
        return best, sims[np.arange(stop - start), best]

    starts = list(range(0, n_rows, BLOCK_ROWS))
    if jobs > 1 and len(starts) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(run, starts))
    else:
        parts = [run(s) for s in starts]
    if not parts:
        return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.float64)
    return np.concatenate([p[0] for p in parts]), np.concatenate([p[1] for p in parts])


def cross_kernel(left: np.ndarray, right: np.ndarray) -> Callable[[int, int], np.ndarray]:
    """Cosine of left rows [start, stop) against every right row (both row-normalized)."""
    transposed = right.T

    def kernel(start: int, stop: int) -> np.ndarray:
        return left[start:stop] @ transposed

    return kernel


def dense_similarity(features, weighting: Weighting) -> np.ndarray:
    """Full n x n similarity matrix, used as a brute-force reference on small inputs."""
    n = features.shape[0]
    kernel = jaccard_block_kernel(features) if weighting == Weighting.TOKEN_JACCARD else cosine_block_kernel(features)
    return np.clip(kernel(0, n), -1.0, 1.0)


def parse_weighting(value) -> Weighting:
    try:
        return Weighting(value)
    except ValueError as e:
        allowed = ", ".join(w.value for w in Weighting)
        raise GraphError(f"unknown weighting '{value}' (expected one of: {allowed})") from e


def feature_matrix(
    weighting: Weighting,
    documents: List[List[str]],
    vectors: List[np.ndarray],
):
    """Row features for a weighting: normalized embeddings, TF-IDF rows or token incidence."""
    if weighting == Weighting.EMBEDDING_COSINE:
        return normalize_rows(np.vstack(vectors))
    if weighting == Weighting.TFIDF_COSINE:
        return tfidf_matrix(documents)
    return incidence_matrix(documents)


def kernel_for(weighting: Weighting, features) -> Callable[[int, int], np.ndarray]:
    if weighting == Weighting.TOKEN_JACCARD:
        return jaccard_block_kernel(features)
    return cosine_block_kernel(features)

