"""
Title persistence across editions: the share of a focal edition's titles that
are absent from (or present in) another edition.
"""

import logging
from dataclasses import asdict, dataclass, field
from typing import List, Sequence, Set, Tuple

import pandas as pd

from occnet.corpus_parser.dedupe import dedupe_and_resolve, normalize_title
from occnet.corpus_parser.models import EditionCorpus
from occnet.errors import DataError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TitleMatching:
    """
    dedup: compare titles of deduplicated entries instead of every printed title.
    alt_titles: also count alternate titles as present.
    """

    dedup: bool = False
    alt_titles: bool = False


@dataclass(frozen=True)
class PersistenceRow:
    focal_year: int
    other_year: int
    gap_years: int
    focal_titles: int
    absent_titles: int
    pct_titles_absent: float
    pct_titles_present: float


@dataclass
class PersistenceTable:
    rows: List[PersistenceRow] = field(default_factory=list)

    def points(self) -> List[Tuple[float, float]]:
        """(gap years, percent absent) for every row."""
        return [(float(r.gap_years), r.pct_titles_absent) for r in self.rows]

    def to_frame(self) -> pd.DataFrame:
        columns = list(PersistenceRow.__dataclass_fields__)
        return pd.DataFrame([asdict(r) for r in self.rows], columns=columns)


def title_set(corpus: EditionCorpus, matching: TitleMatching = TitleMatching()) -> Set[str]:
    source = dedupe_and_resolve(corpus) if matching.dedup else corpus
    titles = set()
    for entry in source.entries:
        titles.add(normalize_title(entry.title))
        if matching.alt_titles:
            titles.update(normalize_title(t) for t in entry.alt_titles)
    titles.discard("")
    return titles


def pair_persistence(focal: Set[str], other: Set[str], focal_year: int, other_year: int) -> PersistenceRow:
    """Row for one ordered pair. Titles of `focal` missing from `other` count as absent."""
    if not focal:
        raise DataError(f"edition {focal_year} has no titles")
    absent = len(focal - other)
    pct_absent = 100.0 * absent / len(focal)
    return PersistenceRow(
        focal_year=focal_year,
        other_year=other_year,
        gap_years=abs(focal_year - other_year),
        focal_titles=len(focal),
        absent_titles=absent,
        pct_titles_absent=pct_absent,
        pct_titles_present=100.0 - pct_absent,
    )


def check_years(editions: Sequence[EditionCorpus]) -> None:
    if len(editions) < 2:
        raise DataError(f"need at least 2 editions, got {len(editions)}")
    years = [e.year for e in editions]
    duplicates = sorted({y for y in years if years.count(y) > 1})
    if duplicates:
        raise DataError(f"duplicate edition years: {duplicates}")


def title_persistence(
    editions: Sequence[EditionCorpus],
    matching: TitleMatching = TitleMatching(),
) -> PersistenceTable:
    """
    Persistence rows for every ordered pair of distinct editions.

    Args:
        editions (list of EditionCorpus): At least two editions with distinct years.
        matching (TitleMatching): Which titles are compared; exact match after
            normalize_title either way.

    Returns:
        PersistenceTable: Rows ordered by (focal_year, other_year).

    Raises:
        DataError: Fewer than two editions or duplicate years.
    """
    check_years(editions)
    ordered = sorted(editions, key=lambda e: e.year)
    sets = {e.year: title_set(e, matching) for e in ordered}
    table = PersistenceTable()
    for focal in ordered:
        for other in ordered:
            if focal.year != other.year:
                table.rows.append(pair_persistence(sets[focal.year], sets[other.year], focal.year, other.year))
    logger.info("Title persistence: %d edition pairs", len(table.rows))
    return table
