"""
Max-similarity decay: for every ordered pair of editions, the mean over focal
jobs of the best cross-edition description similarity.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import List, Sequence, Tuple

import pandas as pd

from occnet.corpus_parser.models import EditionCorpus
from occnet.longitudinal.persistence import check_years
from occnet.text_similarity.embeddings import EmbeddingModel
from occnet.text_similarity.graph import CrossSimilarity, max_cross_similarity

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DecayRow:
    focal_year: int
    other_year: int
    gap_years: int
    mean_max_similarity: float
    n_focal: int


@dataclass(frozen=True)
class MaximumRow:
    focal_year: int
    other_year: int
    focal_id: str
    match_id: str
    similarity: float


@dataclass
class DecayTable:
    rows: List[DecayRow] = field(default_factory=list)
    maxima: List[MaximumRow] = field(default_factory=list)

    def points(self) -> List[Tuple[float, float]]:
        return [(float(r.gap_years), r.mean_max_similarity) for r in self.rows]

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([asdict(r) for r in self.rows], columns=list(DecayRow.__dataclass_fields__))

    def maxima_frame(self) -> pd.DataFrame:
        return pd.DataFrame([asdict(r) for r in self.maxima], columns=list(MaximumRow.__dataclass_fields__))


def similarity_decay(
    editions: Sequence[EditionCorpus],
    model: EmbeddingModel,
    filter_stopwords: bool = True,
    jobs: int = 1,
) -> DecayTable:
    """
    Decay rows and per-job maxima for every ordered pair of distinct editions.

    Pairs are computed independently (threads when jobs > 1) and collected in
    (focal_year, other_year) order.

    Raises:
        DataError: Fewer than two editions or duplicate years.
        GraphError: An edition without embeddable entries.
    """
    check_years(editions)
    ordered = sorted(editions, key=lambda e: e.year)
    pairs = [(a, b) for a in ordered for b in ordered if a.year != b.year]

    def run(pair) -> CrossSimilarity:
        return max_cross_similarity(pair[0], pair[1], model, filter_stopwords)

    if jobs > 1 and len(pairs) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(run, pairs))
    else:
        results = [run(p) for p in pairs]

    table = DecayTable()
    for cross in results:
        table.rows.append(
            DecayRow(
                focal_year=cross.focal_year,
                other_year=cross.other_year,
                gap_years=abs(cross.focal_year - cross.other_year),
                mean_max_similarity=cross.mean_max_similarity,
                n_focal=len(cross.matches),
            )
        )
        for focal_id, (match_id, sim) in cross.matches.items():
            table.maxima.append(MaximumRow(cross.focal_year, cross.other_year, focal_id, match_id, sim))
    return table
