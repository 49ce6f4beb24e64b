"""
Domain records produced by the corpus parser.
"""

from collections import Counter
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, FrozenSet, List, Optional, Tuple

from occnet.corpus_parser.text import remove_stopwords, tokenize


@dataclass(frozen=True)
class OccupationEntry:
    """
    One parsed dictionary record.

    An entry carries a description or a reference list. When both are empty the
    entry is flagged as unparsed and dropped by deduplication.
    """

    entry_id: str
    title: str
    edition_year: int
    alt_titles: Tuple[str, ...] = ()
    code: Optional[str] = None
    codes: Tuple[str, ...] = ()
    industries: Tuple[str, ...] = ()
    description: str = ""
    references: Tuple[str, ...] = ()
    line_start: int = 0
    line_end: int = 0
    raw_text: str = ""

    @property
    def is_unparsed(self) -> bool:
        return not self.description and not self.references

    @property
    def is_reference_only(self) -> bool:
        return not self.description and bool(self.references)

    def to_dict(self) -> Dict[str, Any]:
        # Field order is the serialization order.
        return {
            "entry_id": self.entry_id,
            "title": self.title,
            "alt_titles": list(self.alt_titles),
            "code": self.code,
            "codes": list(self.codes),
            "industries": list(self.industries),
            "description": self.description,
            "references": list(self.references),
            "edition_year": self.edition_year,
            "line_start": self.line_start,
            "line_end": self.line_end,
            "raw_text": self.raw_text,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "OccupationEntry":
        return cls(
            entry_id=data["entry_id"],
            title=data["title"],
            edition_year=int(data["edition_year"]),
            alt_titles=tuple(data.get("alt_titles", ())),
            code=data.get("code"),
            codes=tuple(data.get("codes", ())),
            industries=tuple(data.get("industries", ())),
            description=data.get("description", ""),
            references=tuple(data.get("references", ())),
            line_start=int(data.get("line_start", 0)),
            line_end=int(data.get("line_end", 0)),
            raw_text=data.get("raw_text", ""),
        )


@dataclass(frozen=True)
class Diagnostic:
    """A parser observation that did not become (or only partly became) an entry."""

    kind: str  # "unparsed" | "empty_body"
    line_start: int
    line_end: int
    text: str
    message: str = ""

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class CorpusStats:
    total_entries: int
    distinct_description_entries: int
    mean_description_length: float
    mean_description_length_no_stopwords: float
    vocab_size: int
    entries_with_references: int = 0
    entries_with_code: int = 0
    coded_jobs: int = 0
    unparsed_entries: int = 0

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def compute_stats(entries: List[OccupationEntry], stopwords: FrozenSet[str]) -> Tuple[CorpusStats, Counter]:
    """
    Compute the edition statistics and the token multiset.

    Mean lengths are taken over entries that have a description.

    Returns:
        tuple: (CorpusStats, Counter of description tokens)
    """
    vocab: Counter = Counter()
    lengths: List[int] = []
    lengths_no_stop: List[int] = []
    descriptions = set()

    for entry in entries:
        if not entry.description:
            continue
        tokens = tokenize(entry.description)
        vocab.update(tokens)
        lengths.append(len(tokens))
        lengths_no_stop.append(len(remove_stopwords(tokens, stopwords)))
        descriptions.add(entry.description)

    stats = CorpusStats(
        total_entries=len(entries),
        distinct_description_entries=len(descriptions),
        mean_description_length=(sum(lengths) / len(lengths)) if lengths else 0.0,
        mean_description_length_no_stopwords=(sum(lengths_no_stop) / len(lengths_no_stop)) if lengths_no_stop else 0.0,
        vocab_size=len(vocab),
        entries_with_references=sum(1 for e in entries if e.references),
        entries_with_code=sum(1 for e in entries if e.codes),
        coded_jobs=sum(len(e.codes) for e in entries),
        unparsed_entries=sum(1 for e in entries if e.is_unparsed),
    )
    return stats, vocab


@dataclass(frozen=True)
class EditionCorpus:
    """All entries of one edition plus vocabulary statistics."""

    year: int
    entries: Tuple[OccupationEntry, ...]
    vocab: Counter
    stats: CorpusStats
    stopwords: FrozenSet[str] = frozenset()
    stopwords_hash: str = ""
    diagnostics: Tuple[Diagnostic, ...] = ()

    @classmethod
    def build(
        cls,
        year: int,
        entries: List[OccupationEntry],
        stopwords: FrozenSet[str],
        stopwords_hash: str = "",
        diagnostics: Optional[List[Diagnostic]] = None,
    ) -> "EditionCorpus":
        stats, vocab = compute_stats(list(entries), stopwords)
        return cls(
            year=year,
            entries=tuple(entries),
            vocab=vocab,
            stats=stats,
            stopwords=stopwords,
            stopwords_hash=stopwords_hash,
            diagnostics=tuple(diagnostics or ()),
        )

    def recompute_stats(self) -> CorpusStats:
        return compute_stats(list(self.entries), self.stopwords)[0]

    def description_tokens(self, entry: OccupationEntry, filter_stopwords: bool = True) -> List[str]:
        tokens = tokenize(entry.description)
        if filter_stopwords:
            tokens = remove_stopwords(tokens, self.stopwords)
        return tokens

    def by_id(self) -> Dict[str, OccupationEntry]:
        return {e.entry_id: e for e in self.entries}


@dataclass
class DedupeReport:
    year: int
    input_entries: int
    retained: int
    duplicates_removed: int
    reference_only_removed: int
    unparsed_removed: int
    references_resolved: int
    references_unresolved: int

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass
class SpellReport:
    """Transcription-quality measurement for one edition."""

    edition_year: int
    misspelled_count: int
    total_words: int
    accuracy_rate: float
    misspelled_samples: List[Tuple[str, str]] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["misspelled_samples"] = [list(s) for s in self.misspelled_samples]
        return data
