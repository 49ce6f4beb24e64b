"""
Entry grammar for transcribed dictionary text.
The defaults describe the 1939-1991 entry anatomy; every pattern can be replaced
from a TOML grammar file.
"""

import re
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from dataclasses import dataclass, field
from pathlib import Path
from typing import FrozenSet, List, Optional, Tuple

from occnet.corpus_parser.text import load_stopwords
from occnet.errors import ConfigError

# --- DEFAULT PATTERNS ---
# Title head, then the first parenthesized industry tag on the same line.
DEFAULT_HEAD_PATTERN = r"^\s*(?P<head>[^()\n]+?)\s*\((?P<industry>[^()\n]*)\)"
# Further industry tags directly after the first one.
DEFAULT_EXTRA_INDUSTRY_PATTERN = r"^\s*\((?P<industry>[^()\n]*)\)"
# 6-78.101 (1939/1949), 652.382 (1965), 652.382-010 (1977/1991).
DEFAULT_CODE_PATTERN = r"^\s*[;,]?\s*(?P<code>\d{1,3}(?:[-.]\d{1,3}){1,3})\b"
DEFAULT_REFERENCE_KEYWORDS = ("see ", "ref. to ", "refer to ")
DEFAULT_UPPERCASE_RATIO = 0.8


@dataclass(frozen=True)
class GrammarConfig:
    head_pattern: str = DEFAULT_HEAD_PATTERN
    extra_industry_pattern: str = DEFAULT_EXTRA_INDUSTRY_PATTERN
    code_pattern: str = DEFAULT_CODE_PATTERN
    reference_keywords: Tuple[str, ...] = DEFAULT_REFERENCE_KEYWORDS
    uppercase_ratio: float = DEFAULT_UPPERCASE_RATIO
    industry_separator: str = ";"
    alt_title_separator: str = ";"
    stopwords_path: Optional[str] = None
    stopwords: FrozenSet[str] = field(default=frozenset(), compare=False)
    stopwords_hash: str = ""

    # --- COMPILED PATTERNS ---
    @property
    def head_re(self) -> re.Pattern:
        return re.compile(self.head_pattern)

    @property
    def extra_industry_re(self) -> re.Pattern:
        return re.compile(self.extra_industry_pattern)

    @property
    def code_re(self) -> re.Pattern:
        return re.compile(self.code_pattern)

    @property
    def reference_re(self) -> re.Pattern:
        keywords = "|".join(re.escape(k.lower()) for k in self.reference_keywords)
        return re.compile(rf"^(?:{keywords})\s*(?P<targets>.+?)[.\s]*$", re.IGNORECASE | re.DOTALL)


def default_grammar() -> GrammarConfig:
    stopwords, digest = load_stopwords()
    return GrammarConfig(stopwords=stopwords, stopwords_hash=digest)


def load_grammar_config(path: Optional[Path] = None) -> GrammarConfig:
    """
    Load a grammar TOML file, falling back to the defaults for missing keys.

    Recognised keys: head_pattern, extra_industry_pattern, code_pattern,
    reference_keywords (list), uppercase_ratio, industry_separator,
    alt_title_separator, stopwords_path.

    Raises:
        ConfigError: If the file is unreadable, a pattern does not compile or the
            uppercase ratio is outside (0, 1].
    """
    if path is None:
        return default_grammar()

    path = Path(path)
    try:
        with path.open("rb") as fh:
            data = tomllib.load(fh)
    except (OSError, tomllib.TOMLDecodeError) as e:
        raise ConfigError(f"cannot read grammar config {path}: {e}") from e

    stopwords_path = data.get("stopwords_path")
    if stopwords_path:
        stopwords_path = str((path.parent / stopwords_path).resolve())
    try:
        stopwords, digest = load_stopwords(Path(stopwords_path) if stopwords_path else None)
    except OSError as e:
        raise ConfigError(f"cannot read stop-word file {stopwords_path}: {e}") from e

    config = GrammarConfig(
        head_pattern=data.get("head_pattern", DEFAULT_HEAD_PATTERN),
        extra_industry_pattern=data.get("extra_industry_pattern", DEFAULT_EXTRA_INDUSTRY_PATTERN),
        code_pattern=data.get("code_pattern", DEFAULT_CODE_PATTERN),
        reference_keywords=tuple(data.get("reference_keywords", DEFAULT_REFERENCE_KEYWORDS)),
        uppercase_ratio=float(data.get("uppercase_ratio", DEFAULT_UPPERCASE_RATIO)),
        industry_separator=data.get("industry_separator", ";"),
        alt_title_separator=data.get("alt_title_separator", ";"),
        stopwords_path=stopwords_path,
        stopwords=stopwords,
        stopwords_hash=digest,
    )
    validate_grammar(config)
    return config


def validate_grammar(config: GrammarConfig) -> None:
    if not 0.0 < config.uppercase_ratio <= 1.0:
        raise ConfigError(f"uppercase_ratio must be in (0, 1], got {config.uppercase_ratio}")
    if not config.reference_keywords:
        raise ConfigError("reference_keywords must not be empty")
    for name in ("head_pattern", "extra_industry_pattern", "code_pattern"):
        try:
            re.compile(getattr(config, name))
        except re.error as e:
            raise ConfigError(f"{name} does not compile: {e}") from e
    if "head" not in re.compile(config.head_pattern).groupindex:
        raise ConfigError("head_pattern needs a named group 'head'")


def uppercase_fraction(text: str) -> float:
    """Fraction of letters in text that are uppercase (0.0 when there are none)."""
    letters = [c for c in text if c.isalpha()]
    if not letters:
        return 0.0
    return sum(1 for c in letters if c.isupper()) / len(letters)


def split_list(text: str, separator: str) -> List[str]:
    return [part.strip() for part in text.split(separator) if part.strip()]
