"""
Title-keyword overrides.
A keyword found as a whole word in a title dictates the class of the entry.
"""

import logging
import re
from dataclasses import replace
from pathlib import Path
from typing import Dict, Mapping, Optional

from occnet.errors import ConfigError, LabelError
from occnet.job_classifier.labels import Label, LabelAssignment, parse_label

logger = logging.getLogger(__name__)

DEFAULT_OVERRIDES: Dict[str, Label] = {
    "OPERATOR": Label.PHYSICAL,
    "MAKER": Label.PHYSICAL,
    "SUPERVISOR": Label.COGNITIVE,
    "MANAGER": Label.COGNITIVE,
}


def load_override_config(path: Path) -> Dict[str, Label]:
    """
    Read a `KEYWORD=Physical|Cognitive` file. Blank lines and `#` comments are ignored.

    Raises:
        ConfigError: Missing file or a malformed line (the line number is named).
    """
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"override config not found: {path}")

    overrides: Dict[str, Label] = {}
    for line_no, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{line_no}: expected KEYWORD=Class, got '{raw.strip()}'")
        keyword, value = (part.strip() for part in line.split("=", 1))
        if not keyword:
            raise ConfigError(f"{path}:{line_no}: empty keyword")
        try:
            overrides[keyword.upper()] = parse_label(value)
        except LabelError as e:
            raise ConfigError(f"{path}:{line_no}: {e}") from e
    return overrides


def _keyword_patterns(overrides: Mapping[str, Label]) -> Dict[str, re.Pattern]:
    return {kw: re.compile(rf"(?<![A-Za-z0-9]){re.escape(kw)}(?![A-Za-z0-9])", re.IGNORECASE) for kw in overrides}


def title_class(title: str, overrides: Mapping[str, Label], patterns: Optional[Dict[str, re.Pattern]] = None) -> Optional[Label]:
    """
    Class dictated by the keywords of a title.

    Returns:
        Label or None: None when no keyword matches or when keywords of both classes match.
    """
    patterns = patterns or _keyword_patterns(overrides)
    hits = {overrides[kw] for kw, pattern in patterns.items() if pattern.search(title)}
    if len(hits) == 1:
        return hits.pop()
    if len(hits) > 1:
        logger.warning("Conflicting title keywords in '%s'; no override applied", title)
    return None


def apply_title_overrides(
    assignment: LabelAssignment,
    titles: Mapping[str, str],
    override_config: Optional[Mapping[str, Label]] = None,
) -> LabelAssignment:
    """
    Relabel entries whose title carries a class keyword.

    Args:
        assignment (LabelAssignment): Model labels.
        titles (dict): entry_id -> title.
        override_config (dict, optional): keyword -> class; defaults to DEFAULT_OVERRIDES.

    Returns:
        LabelAssignment: Same entries; matched ones carry override_applied=True.
    """
    overrides = {k.upper(): parse_label(v) for k, v in (override_config or DEFAULT_OVERRIDES).items()}
    patterns = _keyword_patterns(overrides)
    items = {}
    changed = 0
    for entry_id, assigned in assignment.items():
        title = titles.get(entry_id)
        dictated = title_class(title, overrides, patterns) if title else None
        if dictated is None:
            items[entry_id] = assigned
            continue
        if assigned.label != dictated:
            changed += 1
        items[entry_id] = replace(assigned, label=dictated, override_applied=True)
    logger.info("Title overrides changed %d labels", changed)
    return LabelAssignment(items)
