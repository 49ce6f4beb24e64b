"""
Transcription-quality check: counts description words missing from a lexicon.
Misspellings are measured, never corrected.
"""

import logging
from pathlib import Path
from typing import FrozenSet, Iterable, List, Optional, Tuple

from occnet.corpus_parser.models import EditionCorpus, SpellReport
from occnet.corpus_parser.text import tokenize
from occnet.errors import ConfigError, DataError

logger = logging.getLogger(__name__)

DEFAULT_MAX_SAMPLES = 50


def load_lexicon(path: Optional[Path] = None) -> FrozenSet[str]:
    """
    Load a word list (one word per line). Without a path the English word list
    shipped with pyspellchecker is used.
    """
    if path is None:
        from spellchecker import SpellChecker

        return frozenset(w.lower() for w in SpellChecker(language="en").word_frequency.keys())
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"cannot read lexicon {path}: {e}") from e
    return frozenset(line.strip().lower() for line in text.splitlines() if line.strip())


def _checkable(token: str) -> bool:
    return len(token) > 1 and not any(c.isdigit() for c in token)


def validate_spelling(
    corpus: EditionCorpus,
    lexicon: Iterable[str],
    max_samples: int = DEFAULT_MAX_SAMPLES,
) -> SpellReport:
    """
    Measure the share of description words found in the lexicon.

    Args:
        corpus (EditionCorpus): Parsed edition.
        lexicon (iterable of str): Reference words; compared lowercase.
        max_samples (int): Cap on the (token, entry title) samples kept.

    Returns:
        SpellReport: accuracy_rate = 1 - misspelled / total words checked.

    Raises:
        DataError: If the lexicon is empty.
    """
    words = frozenset(w.lower() for w in lexicon)
    if not words:
        raise DataError("spelling lexicon is empty")

    total = 0
    misspelled = 0
    samples: List[Tuple[str, str]] = []
    for entry in corpus.entries:
        for token in tokenize(entry.description):
            if not _checkable(token):
                continue
            total += 1
            if token not in words:
                misspelled += 1
                if len(samples) < max_samples:
                    samples.append((token, entry.title))

    accuracy = 1.0 - misspelled / total if total else 1.0
    logger.info("Edition %d spelling: %d of %d words unknown (%.4f)", corpus.year, misspelled, total, accuracy)
    return SpellReport(
        edition_year=corpus.year,
        misspelled_count=misspelled,
        total_words=total,
        accuracy_rate=accuracy,
        misspelled_samples=samples,
    )
