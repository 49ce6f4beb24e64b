"""
Run configuration: one TOML file describing the inputs and parameters of every
stage. Precedence is command-line flag > TOML value > environment > default.
Relative paths are resolved against the TOML file's directory.
"""

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional

from occnet.config import settings
from occnet.errors import ConfigError

WEIGHTINGS = ("embedding_cosine", "tfidf_cosine", "token_jaccard")
FEATURE_MODES = ("bow", "tfidf")
BASELINES = ("analytic", "numeric", "finite")
EDGE_MODES = ("weighted", "binary")


@dataclass(frozen=True)
class EditionSource:
    year: int
    path: Path


@dataclass(frozen=True)
class SpellcheckConfig:
    lexicon: Optional[Path] = None
    max_samples: int = 50


@dataclass(frozen=True)
class SimilarityConfig:
    threshold: float = 0.85
    weighting: str = "embedding_cosine"
    filter_stopwords: bool = True


@dataclass(frozen=True)
class ClassifierConfig:
    mode: str = "BoW"
    smoothing: float = 1.0
    split_seed: int = 0
    test_fraction: float = 0.2
    training_csv: Optional[Path] = None
    override_config: Optional[Path] = None
    manual_labels: Optional[Path] = None
    apply_overrides: bool = True


@dataclass(frozen=True)
class PolarizationConfig:
    baseline: str = "analytic"
    edge_mode: str = "weighted"
    side: int = 50
    degree: int = 4
    draws: int = 100
    grid_seed: int = 0
    bootstrap: int = field(default_factory=lambda: settings.BOOTSTRAP_B)
    seed: int = 0
    louvain: bool = True


@dataclass(frozen=True)
class LongitudinalConfig:
    dedup: bool = False
    alt_titles: bool = False


@dataclass(frozen=True)
class SweepConfig:
    thresholds: List[float] = field(default_factory=list)
    weightings: List[str] = field(default_factory=list)


@dataclass(frozen=True)
class RunConfig:
    editions: List[EditionSource] = field(default_factory=list)
    embeddings: Optional[Path] = None
    grammar: Optional[Path] = None
    output_dir: Path = field(default_factory=lambda: Path(settings.OUTPUT_DIR))
    jobs: int = field(default_factory=lambda: settings.JOBS)
    spellcheck: SpellcheckConfig = field(default_factory=SpellcheckConfig)
    similarity: SimilarityConfig = field(default_factory=SimilarityConfig)
    classifier: ClassifierConfig = field(default_factory=ClassifierConfig)
    polarization: PolarizationConfig = field(default_factory=PolarizationConfig)
    longitudinal: LongitudinalConfig = field(default_factory=LongitudinalConfig)
    sweep: SweepConfig = field(default_factory=SweepConfig)
    source: Optional[Path] = None

    @property
    def years(self) -> List[int]:
        return [e.year for e in self.editions]

    def snapshot(self) -> Dict[str, Any]:
        """
        Config as plain data for the run manifest. Runtime-only settings (jobs,
        output directory) are left out; paths are relative to the config file.
        """
        base = self.source.parent if self.source else Path.cwd()

        def show(value):
            if isinstance(value, Path):
                try:
                    return value.resolve().relative_to(base.resolve()).as_posix()
                except ValueError:
                    return value.as_posix()
            if isinstance(value, dict):
                return {k: show(v) for k, v in value.items()}
            if isinstance(value, (list, tuple)):
                return [show(v) for v in value]
            return value

        data = {f.name: getattr(self, f.name) for f in fields(self) if f.name not in ("jobs", "output_dir", "source")}
        out = {}
        for key, value in data.items():
            if key == "editions":
                out[key] = [{"year": e.year, "path": show(e.path)} for e in value]
            elif hasattr(value, "__dataclass_fields__"):
                out[key] = show(asdict(value))
            else:
                out[key] = show(value)
        return out


SECTIONS = {
    "spellcheck": SpellcheckConfig,
    "similarity": SimilarityConfig,
    "classifier": ClassifierConfig,
    "polarization": PolarizationConfig,
    "longitudinal": LongitudinalConfig,
    "sweep": SweepConfig,
}
PATH_KEYS = {
    ("spellcheck", "lexicon"),
    ("classifier", "training_csv"),
    ("classifier", "override_config"),
    ("classifier", "manual_labels"),
}


def _section(cls, data: Mapping[str, Any], name: str, base: Path):
    known = {f.name for f in fields(cls)}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ConfigError(f"[{name}]: unknown keys {unknown}")
    values = {}
    for key, value in data.items():
        if (name, key) in PATH_KEYS and value is not None:
            value = base / value
        values[key] = value
    try:
        return cls(**values)
    except TypeError as e:
        raise ConfigError(f"[{name}]: {e}") from e


def load_run_config(path: Optional[Path] = None, overrides: Optional[Mapping[str, Any]] = None) -> RunConfig:
    """
    Build a RunConfig from a TOML file and flag overrides, then validate it.

    Args:
        path (Path, optional): TOML file. Without it only overrides, environment
            and defaults apply.
        overrides (dict, optional): Flag values keyed "output_dir", "jobs",
            "embeddings" or "<section>.<key>"; None values are ignored.

    Returns:
        RunConfig

    Raises:
        ConfigError: Unreadable file, unknown keys or an invalid value.
    """
    data: Dict[str, Any] = {}
    base = Path.cwd()
    source = None
    if path is not None:
        source = Path(path).resolve()
        base = source.parent
        try:
            with source.open("rb") as fh:
                data = tomllib.load(fh)
        except FileNotFoundError as e:
            raise ConfigError(f"config file not found: {path}") from e
        except (OSError, tomllib.TOMLDecodeError) as e:
            raise ConfigError(f"cannot read config {path}: {e}") from e

    top_known = {"output_dir", "jobs", "editions", "embeddings", "grammar"} | set(SECTIONS)
    unknown = sorted(set(data) - top_known)
    if unknown:
        raise ConfigError(f"unknown config keys: {unknown}")

    editions = []
    for item in data.get("editions", []):
        try:
            editions.append(EditionSource(int(item["year"]), base / item["path"]))
        except (KeyError, TypeError, ValueError) as e:
            raise ConfigError(f"[[editions]] needs integer 'year' and 'path': {item}") from e

    def table_path(key: str) -> Optional[Path]:
        value = data.get(key)
        if isinstance(value, dict):
            value = value.get("path")
        return base / value if value else None

    kwargs: Dict[str, Any] = {
        "editions": editions,
        "embeddings": table_path("embeddings"),
        "grammar": table_path("grammar"),
        "source": source,
    }
    if "output_dir" in data:
        kwargs["output_dir"] = base / data["output_dir"]
    if "jobs" in data:
        kwargs["jobs"] = data["jobs"]
    for name, cls in SECTIONS.items():
        kwargs[name] = _section(cls, data.get(name, {}), name, base)
    config = RunConfig(**kwargs)

    config = apply_overrides(config, overrides or {})
    validate_run_config(config)
    return config


def apply_overrides(config: RunConfig, overrides: Mapping[str, Any]) -> RunConfig:
    for key, value in overrides.items():
        if value is None:
            continue
        if "." not in key:
            if key in ("output_dir", "embeddings", "grammar"):
                value = Path(value)
            config = replace(config, **{key: value})
            continue
        section, name = key.split(".", 1)
        if section not in SECTIONS or name not in {f.name for f in fields(SECTIONS[section])}:
            raise ConfigError(f"unknown override '{key}'")
        if (section, name) in PATH_KEYS:
            value = Path(value)
        config = replace(config, **{section: replace(getattr(config, section), **{name: value})})
    return config


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise ConfigError(message)


def validate_run_config(config: RunConfig) -> None:
    """
    Check every value before any work starts.

    Raises:
        ConfigError: Missing paths, duplicate years or out-of-range values,
            naming the offending value.
    """
    years = config.years
    duplicates = sorted({y for y in years if years.count(y) > 1})
    _require(not duplicates, f"duplicate edition years: {duplicates}")
    for edition in config.editions:
        _require(edition.path.exists(), f"edition file not found: {edition.path}")
    for label, path in (
        ("embeddings", config.embeddings),
        ("grammar", config.grammar),
        ("spellcheck.lexicon", config.spellcheck.lexicon),
        ("classifier.training_csv", config.classifier.training_csv),
        ("classifier.override_config", config.classifier.override_config),
        ("classifier.manual_labels", config.classifier.manual_labels),
    ):
        _require(path is None or Path(path).exists(), f"{label} not found: {path}")

    _require(isinstance(config.jobs, int) and config.jobs >= 1, f"jobs must be a positive integer, got {config.jobs}")

    sim = config.similarity
    _require(-1.0 <= float(sim.threshold) <= 1.0, f"similarity.threshold must be in [-1, 1], got {sim.threshold}")
    _require(sim.weighting in WEIGHTINGS, f"unknown similarity.weighting '{sim.weighting}' (expected one of {WEIGHTINGS})")

    clf = config.classifier
    _require(str(clf.mode).lower() in FEATURE_MODES, f"unknown classifier.mode '{clf.mode}' (expected BoW or TFIDF)")
    _require(float(clf.smoothing) > 0, f"classifier.smoothing must be positive, got {clf.smoothing}")
    _require(0.0 < float(clf.test_fraction) < 1.0, f"classifier.test_fraction must be in (0, 1), got {clf.test_fraction}")

    pol = config.polarization
    _require(pol.baseline in BASELINES, f"unknown polarization.baseline '{pol.baseline}' (expected one of {BASELINES})")
    _require(pol.edge_mode in EDGE_MODES, f"unknown polarization.edge_mode '{pol.edge_mode}' (expected one of {EDGE_MODES})")
    _require(pol.bootstrap >= 1, f"polarization.bootstrap must be >= 1, got {pol.bootstrap}")
    _require(pol.side >= 2, f"polarization.side must be >= 2, got {pol.side}")
    _require(pol.degree in (4, 8), f"polarization.degree must be 4 or 8, got {pol.degree}")
    _require(pol.draws >= 1, f"polarization.draws must be >= 1, got {pol.draws}")

    for t in config.sweep.thresholds:
        _require(-1.0 <= float(t) <= 1.0, f"sweep threshold must be in [-1, 1], got {t}")
    for w in config.sweep.weightings:
        _require(w in WEIGHTINGS, f"unknown sweep weighting '{w}'")
    _require(config.spellcheck.max_samples >= 0, f"spellcheck.max_samples must be >= 0, got {config.spellcheck.max_samples}")
