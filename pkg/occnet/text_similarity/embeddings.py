"""
Word-vector loading and averaged description embeddings.
"""

import hashlib
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Collection, Dict, List, Optional, Sequence

import numpy as np

from occnet.errors import EmbeddingFormatError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EmbeddingModel:
    """
    Read-only token -> vector table.

    Vectors live in one float64 matrix; `index` maps a token to its row. A token
    that is not in the table is missing, there is no fallback vector.
    """

    dimension: int
    index: Dict[str, int]
    matrix: np.ndarray
    source_id: str = ""
    duplicate_tokens: tuple = field(default=(), compare=False)

    def __len__(self) -> int:
        return len(self.index)

    def __contains__(self, token: str) -> bool:
        return token in self.index

    def lookup(self, token: str) -> Optional[np.ndarray]:
        row = self.index.get(token)
        if row is None:
            return None
        return self.matrix[row]

    @classmethod
    def from_vectors(cls, vectors: Dict[str, Sequence[float]], source_id: str = "in-memory") -> "EmbeddingModel":
        """Build a model from a plain dict (fixtures, synthetic data)."""
        if not vectors:
            raise EmbeddingFormatError("no vectors given")
        tokens = list(vectors)
        matrix = np.asarray([vectors[t] for t in tokens], dtype=np.float64)
        if matrix.ndim != 2:
            raise EmbeddingFormatError("vectors have inconsistent lengths")
        return cls(dimension=matrix.shape[1], index={t: i for i, t in enumerate(tokens)}, matrix=matrix, source_id=source_id)


@dataclass(frozen=True)
class DescriptionVector:
    """Mean word vector of one description; `vector` is None when no token is covered."""

    entry_id: str
    vector: Optional[np.ndarray]
    covered_tokens: int
    total_tokens: int

    @property
    def is_empty(self) -> bool:
        return self.covered_tokens == 0


def _is_header(parts: List[str]) -> bool:
    return len(parts) == 2 and all(p.isdigit() for p in parts)


def load_embeddings(
    path: Path,
    expected_dim: Optional[int] = None,
    restrict_to: Optional[Collection[str]] = None,
) -> EmbeddingModel:
    """
    Load a text word-vector file.

    Format: optional header line "count dim", then one token followed by d
    whitespace-separated reals per line. Duplicate tokens keep the last vector
    and log a warning.

    Args:
        path (Path): Vector file.
        expected_dim (int, optional): Required dimension.
        restrict_to (collection of str, optional): Keep only these tokens. Every
            line is still validated.

    Returns:
        EmbeddingModel: The loaded model; source_id is the file's sha256.

    Raises:
        EmbeddingFormatError: On an empty file or a line of the wrong dimension.
    """
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as e:
        raise EmbeddingFormatError(f"cannot read {path}: {e}") from e

    dim = expected_dim
    index: Dict[str, int] = {}
    rows: List[np.ndarray] = []
    duplicates: List[str] = []
    first = True
    vector_lines = 0

    for line_no, line in enumerate(raw.decode("utf-8").splitlines(), start=1):
        parts = line.split()
        if not parts:
            continue
        if first:
            first = False
            if _is_header(parts):
                header_dim = int(parts[1])
                if dim is not None and header_dim != dim:
                    raise EmbeddingFormatError(f"header dimension {header_dim} != expected {dim}", line_no)
                dim = header_dim
                continue

        token, values = parts[0], parts[1:]
        if dim is None:
            dim = len(values)
            if dim == 0:
                raise EmbeddingFormatError(f"token '{token}' has no values", line_no)
        if len(values) != dim:
            raise EmbeddingFormatError(f"expected {dim} values for '{token}', got {len(values)}", line_no)
        vector_lines += 1
        if restrict_to is not None and token not in restrict_to:
            continue
        try:
            vector = np.asarray([float(v) for v in values], dtype=np.float64)
        except ValueError as e:
            raise EmbeddingFormatError(f"non-numeric value for '{token}': {e}", line_no) from e

        if token in index:
            logger.warning("Duplicate embedding token '%s' at line %d; keeping the last vector", token, line_no)
            duplicates.append(token)
            rows[index[token]] = vector
        else:
            index[token] = len(rows)
            rows.append(vector)

    if vector_lines == 0:
        raise EmbeddingFormatError(f"empty embedding file: {path}")
    if not rows:
        logger.warning("No vectors of %s matched the requested vocabulary", path)

    matrix = np.vstack(rows) if rows else np.zeros((0, dim), dtype=np.float64)
    logger.info("Loaded %d vectors of dimension %d from %s", len(rows), dim, path)
    return EmbeddingModel(
        dimension=dim,
        index=index,
        matrix=matrix,
        source_id=hashlib.sha256(raw).hexdigest(),
        duplicate_tokens=tuple(duplicates),
    )


def embed_description(tokens: Sequence[str], model: EmbeddingModel, entry_id: str = "") -> DescriptionVector:
    """
    Average the vectors of the tokens found in the model.

    Out-of-vocabulary tokens are skipped. Found tokens are summed in sorted order,
    so the result does not depend on token order.
    """
    rows = sorted(model.index[t] for t in tokens if t in model.index)
    if not rows:
        return DescriptionVector(entry_id, None, 0, len(tokens))
    vector = model.matrix[rows].mean(axis=0)
    return DescriptionVector(entry_id, vector, len(rows), len(tokens))
