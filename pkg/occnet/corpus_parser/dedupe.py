"""
Deduplication and reference resolution.
Only entries with their own, unique description are kept for the analyses.
"""

import logging
import re
from typing import Dict, Optional, Tuple

from occnet.corpus_parser.models import DedupeReport, EditionCorpus, OccupationEntry

logger = logging.getLogger(__name__)

_TRAILING_PUNCT = re.compile(r"[\s.,;:]+$")


def normalize_title(title: str) -> str:
    """Uppercase, collapse whitespace, strip trailing punctuation."""
    return _TRAILING_PUNCT.sub("", " ".join(title.upper().split()))


def resolve_references(corpus: EditionCorpus) -> Dict[str, Optional[str]]:
    """
    Map every reference-only entry to the entry it defers to.

    Targets are matched by normalized title (then alternate title) against
    entries that have a description; the first entry in document order wins.

    Returns:
        dict: entry_id -> target entry_id, or None when unresolved.
    """
    index: Dict[str, str] = {}
    for entry in corpus.entries:
        if not entry.description:
            continue
        for name in (entry.title,) + entry.alt_titles:
            index.setdefault(normalize_title(name), entry.entry_id)

    resolved: Dict[str, Optional[str]] = {}
    for entry in corpus.entries:
        if not entry.is_reference_only:
            continue
        target = None
        for ref in entry.references:
            target = index.get(normalize_title(ref))
            if target:
                break
        resolved[entry.entry_id] = target
    return resolved


def dedupe_with_report(corpus: EditionCorpus) -> Tuple[EditionCorpus, DedupeReport]:
    """
    Keep exactly one entry per distinct description string.

    The first entry in document order wins. Reference-only entries and entries
    with neither description nor references are dropped.

    Returns:
        tuple: (deduplicated EditionCorpus, DedupeReport)
    """
    resolved = resolve_references(corpus)
    seen = set()
    kept = []
    duplicates = reference_only = unparsed = 0

    for entry in corpus.entries:
        if entry.is_reference_only:
            reference_only += 1
            continue
        if entry.is_unparsed:
            unparsed += 1
            continue
        if entry.description in seen:
            duplicates += 1
            continue
        seen.add(entry.description)
        kept.append(entry)

    deduped = EditionCorpus.build(
        year=corpus.year,
        entries=kept,
        stopwords=corpus.stopwords,
        stopwords_hash=corpus.stopwords_hash,
        diagnostics=list(corpus.diagnostics),
    )
    report = DedupeReport(
        year=corpus.year,
        input_entries=len(corpus.entries),
        retained=len(kept),
        duplicates_removed=duplicates,
        reference_only_removed=reference_only,
        unparsed_removed=unparsed,
        references_resolved=sum(1 for v in resolved.values() if v),
        references_unresolved=sum(1 for v in resolved.values() if not v),
    )
    logger.info(
        "Edition %d: kept %d of %d entries (%d duplicate, %d reference-only, %d unparsed)",
        corpus.year, report.retained, report.input_entries, duplicates, reference_only, unparsed,
    )
    return deduped, report


def dedupe_and_resolve(corpus: EditionCorpus) -> EditionCorpus:
    return dedupe_with_report(corpus)[0]
