"""
On-disk formats for parsed corpora: line-delimited JSON entries, a stats JSON
and a diagnostics JSONL file per edition.
"""

import json
from pathlib import Path
from typing import Any, Dict, FrozenSet, List

from occnet.corpus_parser.models import Diagnostic, EditionCorpus, OccupationEntry
from occnet.errors import DataError


def write_json(data: Any, path: Path) -> None:
    """Write JSON with a stable layout (sorted keys off, fixed indent, trailing newline)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(data, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")


def read_json(path: Path) -> Any:
    path = Path(path)
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError as e:
        raise DataError(f"missing file: {path}") from e
    except json.JSONDecodeError as e:
        raise DataError(f"invalid JSON in {path}: {e}") from e


def write_corpus_jsonl(corpus: EditionCorpus, path: Path) -> None:
    """
    Serialize entries one per line; also writes `<stem>.stats.json` and
    `<stem>.diagnostics.jsonl` next to it.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        for entry in corpus.entries:
            fh.write(json.dumps(entry.to_dict(), ensure_ascii=False) + "\n")

    stats: Dict[str, Any] = {"year": corpus.year, "stopwords_sha256": corpus.stopwords_hash}
    stats.update(corpus.stats.to_dict())
    write_json(stats, stats_path(path))

    with diagnostics_path(path).open("w", encoding="utf-8", newline="\n") as fh:
        for diag in corpus.diagnostics:
            fh.write(json.dumps(diag.to_dict(), ensure_ascii=False) + "\n")


def stats_path(corpus_path: Path) -> Path:
    corpus_path = Path(corpus_path)
    return corpus_path.with_name(corpus_path.stem + ".stats.json")


def diagnostics_path(corpus_path: Path) -> Path:
    corpus_path = Path(corpus_path)
    return corpus_path.with_name(corpus_path.stem + ".diagnostics.jsonl")


def read_corpus_jsonl(path: Path, year: int, stopwords: FrozenSet[str], stopwords_hash: str = "") -> EditionCorpus:
    """
    Load a corpus written by write_corpus_jsonl; stats are recomputed from the entries.
    """
    path = Path(path)
    if not path.exists():
        raise DataError(f"missing corpus file: {path}")

    entries: List[OccupationEntry] = []
    with path.open(encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                entries.append(OccupationEntry.from_dict(json.loads(line)))
            except (json.JSONDecodeError, KeyError, ValueError) as e:
                raise DataError(f"{path}:{line_no}: bad entry record: {e}") from e

    diagnostics: List[Diagnostic] = []
    diag_file = diagnostics_path(path)
    if diag_file.exists():
        with diag_file.open(encoding="utf-8") as fh:
            for line in fh:
                if line.strip():
                    diagnostics.append(Diagnostic(**json.loads(line)))

    return EditionCorpus.build(year, entries, stopwords, stopwords_hash, diagnostics)
