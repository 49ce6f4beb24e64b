"""
Tokenization and stop-word helpers shared by the parser, the similarity graph
and the classifier.
"""

import hashlib
import re
from pathlib import Path
from typing import FrozenSet, Iterable, List, Optional, Tuple

# Lowercase, split on anything that is not a letter or digit (accented letters included).
TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)

DEFAULT_STOPWORDS_PATH = Path(__file__).parent / "data" / "stopwords.txt"


def tokenize(text: str) -> List[str]:
    """
    Split text into lowercase alphanumeric tokens. Accented letters stay in
    their word ("café" -> "café").

    Hyphenated words are split ("bench-lathe" -> "bench", "lathe") and pure
    punctuation never produces a token.
    """
    return TOKEN_RE.findall(text.lower())


def remove_stopwords(tokens: Iterable[str], stopwords: FrozenSet[str]) -> List[str]:
    return [t for t in tokens if t not in stopwords]


def load_stopwords(path: Optional[Path] = None) -> Tuple[FrozenSet[str], str]:
    """
    Load a stop-word file (one word per line, '#' comments).

    Args:
        path (Path, optional): Stop-word file. Defaults to the shipped list.

    Returns:
        tuple: (frozenset of words, sha256 hex digest of the file bytes)
    """
    path = Path(path) if path else DEFAULT_STOPWORDS_PATH
    raw = path.read_bytes()
    words = set()
    for line in raw.decode("utf-8").splitlines():
        line = line.strip().lower()
        if line and not line.startswith("#"):
            words.add(line)
    return frozenset(words), hashlib.sha256(raw).hexdigest()
