"""
Run manifest, stage timings and output-directory hashing.
"""

import hashlib
import logging
import time
from contextlib import contextmanager
from pathlib import Path
from typing import Dict, Iterable, Iterator, List, Optional

from occnet import __version__
from occnet.config.run_config import RunConfig
from occnet.corpus_parser.io import write_json

logger = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.json"
TIMINGS_NAME = "timings.json"
# Wall times differ between identical runs.
HASH_EXCLUDE = frozenset({TIMINGS_NAME})


def sha256_file(path: Path) -> str:
    digest = hashlib.sha256()
    with Path(path).open("rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def hash_output_dir(root: Path, exclude: Iterable[str] = HASH_EXCLUDE) -> str:
    """
    One digest over every file below `root` (relative path and content), in
    sorted path order. Files named in `exclude` are skipped.
    """
    root = Path(root)
    skip = set(exclude)
    digest = hashlib.sha256()
    for path in sorted(p for p in root.rglob("*") if p.is_file()):
        rel = path.relative_to(root).as_posix()
        if rel in skip:
            continue
        digest.update(rel.encode("utf-8") + b"\0")
        digest.update(sha256_file(path).encode("ascii") + b"\n")
    return digest.hexdigest()


class StageTimer:
    """Collects wall time per stage name, in execution order."""

    def __init__(self):
        self.seconds: Dict[str, float] = {}

    @contextmanager
    def stage(self, name: str) -> Iterator[None]:
        start = time.perf_counter()
        try:
            yield
        finally:
            elapsed = time.perf_counter() - start
            self.seconds[name] = elapsed
            logger.info("Stage %s finished in %.2fs", name, elapsed)

    def write(self, path: Path) -> None:
        write_json({"stages": self.seconds, "total": sum(self.seconds.values())}, path)


def input_hashes(config: RunConfig) -> Dict[str, str]:
    """SHA-256 of every input file named by the config, keyed as in the snapshot."""
    base = config.source.parent if config.source else Path.cwd()
    paths: List[Path] = [e.path for e in config.editions]
    for candidate in (
        config.embeddings,
        config.grammar,
        config.spellcheck.lexicon,
        config.classifier.training_csv,
        config.classifier.override_config,
        config.classifier.manual_labels,
    ):
        if candidate is not None:
            paths.append(Path(candidate))

    hashes = {}
    for path in paths:
        try:
            key = path.resolve().relative_to(base.resolve()).as_posix()
        except ValueError:
            key = path.as_posix()
        hashes[key] = sha256_file(path)
    return dict(sorted(hashes.items()))


def build_manifest(config: RunConfig, stages: List[str], stopwords_hash: str, extra: Optional[Dict] = None) -> Dict:
    manifest = {
        "tool": "occnet",
        "version": __version__,
        "stages": stages,
        "config": config.snapshot(),
        "inputs": input_hashes(config),
        "stopwords_sha256": stopwords_hash,
        "seeds": {
            "classifier.split_seed": config.classifier.split_seed,
            "polarization.seed": config.polarization.seed,
            "polarization.grid_seed": config.polarization.grid_seed,
        },
    }
    if extra:
        manifest.update(extra)
    return manifest


def write_manifest(manifest: Dict, output_dir: Path) -> Path:
    path = Path(output_dir) / MANIFEST_NAME
    write_json(manifest, path)
    return path
