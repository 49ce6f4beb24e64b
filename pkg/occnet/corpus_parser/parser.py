"""
Parser for transcribed occupational-dictionary editions.
Turns raw text into OccupationEntry records in document order and accounts for
every line: text that does not belong to an entry is kept as a diagnostic.
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Tuple

from occnet.corpus_parser.grammar import GrammarConfig, default_grammar, split_list, uppercase_fraction
from occnet.corpus_parser.models import Diagnostic, EditionCorpus, OccupationEntry
from occnet.errors import DataError, ParseError

logger = logging.getLogger(__name__)


def normalize_space(text: str) -> str:
    return " ".join(text.split())


def is_entry_start(line: str, grammar: GrammarConfig) -> bool:
    """
    True when the line opens a new entry: an (almost) all-uppercase head followed
    by a parenthesized industry tag.
    """
    match = grammar.head_re.match(line)
    if not match:
        return False
    head = match.group("head")
    if sum(1 for c in head if c.isalpha()) < 2:
        return False
    return uppercase_fraction(head) >= grammar.uppercase_ratio


def _parse_header(line: str, grammar: GrammarConfig) -> Tuple[str, List[str], List[str], List[str], str]:
    """
    Split an entry's first line into its structured parts.

    Returns:
        tuple: (title, alt_titles, industries, codes, remainder of the line)
    """
    match = grammar.head_re.match(line)
    names = split_list(match.group("head"), grammar.alt_title_separator)
    title = normalize_space(names[0]) if names else normalize_space(match.group("head"))
    alt_titles = [normalize_space(n) for n in names[1:]]

    industries: List[str] = []
    if "industry" in grammar.head_re.groupindex and match.group("industry") is not None:
        industries.extend(split_list(match.group("industry"), grammar.industry_separator))
    rest = line[match.end():]

    extra = grammar.extra_industry_re
    while True:
        more = extra.match(rest)
        if not more:
            break
        industries.extend(split_list(more.group("industry"), grammar.industry_separator))
        rest = rest[more.end():]

    codes: List[str] = []
    code_re = grammar.code_re
    while True:
        found = code_re.match(rest)
        if not found:
            break
        codes.append(found.group("code"))
        rest = rest[found.end():]

    return title, alt_titles, industries, codes, rest.lstrip(" .;,:")


def _build_entry(
    lines: Sequence[str],
    first_line_no: int,
    index: int,
    year: int,
    grammar: GrammarConfig,
    diagnostics: List[Diagnostic],
) -> OccupationEntry:
    title, alt_titles, industries, codes, rest = _parse_header(lines[0], grammar)
    body = normalize_space(" ".join([rest] + [l.strip() for l in lines[1:]]))
    last_line_no = first_line_no + len(lines) - 1
    raw = "\n".join(lines)

    description = ""
    references: List[str] = []
    if not body:
        logger.warning("Entry '%s' (line %d) has no body", title, first_line_no)
        diagnostics.append(Diagnostic("empty_body", first_line_no, last_line_no, raw, f"entry '{title}' has no body"))
    else:
        ref = grammar.reference_re.match(body)
        if ref:
            references = split_list(ref.group("targets"), ";")
        else:
            description = body

    return OccupationEntry(
        entry_id=f"{year}-{index:05d}",
        title=title,
        edition_year=year,
        alt_titles=tuple(alt_titles),
        code=codes[0] if codes else None,
        codes=tuple(codes),
        industries=tuple(industries),
        description=description,
        references=tuple(references),
        line_start=first_line_no,
        line_end=last_line_no,
        raw_text=raw,
    )


def parse_edition(raw_text: str, year: int, grammar_config: Optional[GrammarConfig] = None) -> EditionCorpus:
    """
    Parse one edition's transcription.

    Args:
        raw_text (str): Plain text of the edition.
        year (int): Edition year.
        grammar_config (GrammarConfig, optional): Entry grammar; defaults apply
            when omitted.

    Returns:
        EditionCorpus: Entries in document order with stats and diagnostics.

    Raises:
        ParseError: If the input is empty.
    """
    grammar = grammar_config or default_grammar()
    if not raw_text or not raw_text.strip():
        raise ParseError(f"empty input for edition {year}")

    lines = raw_text.splitlines()
    starts = [i for i, line in enumerate(lines) if is_entry_start(line, grammar)]
    diagnostics: List[Diagnostic] = []

    # Leading text before the first entry (front matter, headers, noise)
    leading_end = starts[0] if starts else len(lines)
    leading = lines[:leading_end]
    if any(l.strip() for l in leading):
        diagnostics.append(
            Diagnostic("unparsed", 1, leading_end, "\n".join(leading), "text outside any entry")
        )

    entries: List[OccupationEntry] = []
    for k, start in enumerate(starts):
        end = starts[k + 1] if k + 1 < len(starts) else len(lines)
        entries.append(_build_entry(lines[start:end], start + 1, k, year, grammar, diagnostics))

    if not entries:
        logger.warning("No entries recognised in edition %d", year)

    corpus = EditionCorpus.build(
        year=year,
        entries=entries,
        stopwords=grammar.stopwords,
        stopwords_hash=grammar.stopwords_hash,
        diagnostics=diagnostics,
    )
    logger.info(
        "Parsed edition %d: %d entries, %d diagnostics",
        year, corpus.stats.total_entries, len(diagnostics),
    )
    return corpus


def read_edition_text(path: Path) -> str:
    path = Path(path)
    try:
        return path.read_text(encoding="utf-8")
    except FileNotFoundError as e:
        raise DataError(f"edition file not found: {path}") from e
    except (OSError, UnicodeDecodeError) as e:
        raise DataError(f"cannot read edition file {path}: {e}") from e


def _parse_file(args: Tuple[Path, int, GrammarConfig]) -> EditionCorpus:
    path, year, grammar = args
    return parse_edition(read_edition_text(path), year, grammar)


def parse_editions(
    sources: Iterable[Tuple[Path, int]],
    grammar_config: Optional[GrammarConfig] = None,
    jobs: int = 1,
) -> List[EditionCorpus]:
    """
    Parse several edition files, optionally in worker processes.

    The result order follows `sources` regardless of `jobs`.
    """
    grammar = grammar_config or default_grammar()
    work = [(Path(p), int(y), grammar) for p, y in sources]
    if jobs <= 1 or len(work) <= 1:
        return [_parse_file(w) for w in work]
    with ProcessPoolExecutor(max_workers=min(jobs, len(work))) as pool:
        return list(pool.map(_parse_file, work))
