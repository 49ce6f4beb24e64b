"""
Sparse text features for the Naive Bayes classifier.

BoW: raw token counts. TFIDF: count * ln(N / df), with N and df taken from the
training documents and frozen into the model.
"""

import math
from collections import Counter
from enum import Enum
from typing import Dict, Iterable, Mapping, Optional, Sequence

from occnet.corpus_parser.text import tokenize


class FeatureMode(str, Enum):
    BOW = "BoW"
    TFIDF = "TFIDF"


def parse_mode(value) -> FeatureMode:
    if isinstance(value, FeatureMode):
        return value
    text = str(value).strip().lower()
    for mode in FeatureMode:
        if mode.value.lower() == text:
            return mode
    raise ValueError(f"unknown feature mode '{value}' (expected BoW or TFIDF)")


def compute_idf(documents: Iterable[Sequence[str]]) -> Dict[str, float]:
    """ln(N / df) for every token of the tokenized documents."""
    df: Counter = Counter()
    n = 0
    for doc in documents:
        n += 1
        df.update(set(doc))
    return {token: math.log(n / count) for token, count in df.items()}


def featurize(
    description: str,
    mode=FeatureMode.BOW,
    vocabulary: Optional[Iterable[str]] = None,
    idf: Optional[Mapping[str, float]] = None,
) -> Dict[str, float]:
    """
    Sparse feature vector of one description.

    Args:
        description (str): Free text, tokenized with the corpus rules.
        mode (FeatureMode): BoW or TFIDF.
        vocabulary (iterable of str, optional): Known tokens; others are ignored.
        idf (mapping, optional): Frozen idf values, required for TFIDF.

    Returns:
        dict: token -> feature value.
    """
    mode = parse_mode(mode)
    counts = Counter(tokenize(description))
    if vocabulary is not None:
        known = vocabulary if isinstance(vocabulary, (set, frozenset, dict)) else set(vocabulary)
        counts = Counter({t: c for t, c in counts.items() if t in known})
    if mode == FeatureMode.BOW:
        return {t: float(c) for t, c in counts.items()}
    if idf is None:
        raise ValueError("TFIDF features need idf values")
    return {t: c * idf[t] for t, c in counts.items() if t in idf}
