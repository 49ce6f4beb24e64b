"""
Seeded synthetic data: labeled descriptions, planted graphs, edition families
with fixed title turnover, and a complete multi-edition run fixture.
"""

import logging
from pathlib import Path
from typing import Dict, List, Sequence, Tuple

import numpy as np

from occnet.corpus_parser.models import EditionCorpus, OccupationEntry
from occnet.corpus_parser.text import load_stopwords
from occnet.job_classifier.labels import Label, LabeledExample
from occnet.text_similarity.graph import SimilarityGraph
from occnet.text_similarity.similarity import Weighting

logger = logging.getLogger(__name__)

# --- VOCABULARIES ---
PHYSICAL_WORDS = (
    "lathe", "drill", "weld", "lift", "haul", "cut", "assemble", "grind", "pour", "load",
    "carry", "hammer", "saw", "sand", "paint", "dig", "press", "stack", "bolt", "sew",
    "mold", "plow", "stitch", "scrub", "pack", "fold", "trim", "polish", "mix", "solder",
    "rivet", "forge", "chisel", "shovel", "scrape", "hoist", "tow", "melt", "cast", "hoe",
)
COGNITIVE_WORDS = (
    "analyze", "plan", "direct", "schedule", "record", "compute", "audit", "teach", "negotiate", "evaluate",
    "advise", "design", "coordinate", "budget", "report", "review", "forecast", "counsel", "instruct", "research",
    "draft", "supervise", "assess", "interview", "translate", "program", "estimate", "manage", "compile", "verify",
    "calculate", "diagnose", "consult", "arbitrate", "edit", "lecture", "mediate", "appraise", "authorize", "survey",
)
SHARED_WORDS = (
    "worker", "performs", "duties", "various", "tasks", "uses", "materials", "according", "specifications", "equipment",
    "daily", "work", "orders", "standard", "procedures", "assigned", "area", "shop", "office", "department",
    "routine", "requirements", "related", "general", "products", "items", "units", "parts", "sections", "papers",
    "company", "customers", "staff", "business", "operations", "services", "regular", "duty", "job", "activities",
    "supplies", "files", "benches", "systems", "machines", "methods", "forms", "records", "plant", "site",
    "process", "quality", "time", "tools", "data", "documents", "reports", "accounts", "goods", "stock",
)


def generate_labeled_examples(
    n: int = 672,
    noise: float = 0.1,
    seed: int = 0,
    doc_length: int = 20,
    class_share: float = 0.4,
) -> List[LabeledExample]:
    """
    Balanced Physical/Cognitive descriptions with controllable separability.

    Each description has `doc_length` tokens, a `class_share` fraction drawn from
    its class vocabulary and the rest from a shared vocabulary. Exactly
    round(noise * n) labels are then flipped. class_share = 1 and noise = 0 give
    perfectly separable data.
    """
    if not 0.0 <= noise <= 1.0:
        raise ValueError(f"noise must be in [0, 1], got {noise}")
    rng = np.random.default_rng(seed)
    n_class = int(round(class_share * doc_length))
    examples: List[Tuple[str, Label]] = []
    for i in range(n):
        label = Label.PHYSICAL if i % 2 == 0 else Label.COGNITIVE
        own = PHYSICAL_WORDS if label == Label.PHYSICAL else COGNITIVE_WORDS
        words = list(rng.choice(own, size=n_class)) + list(rng.choice(SHARED_WORDS, size=doc_length - n_class))
        rng.shuffle(words)
        examples.append((" ".join(words), label))

    flipped = set(rng.choice(n, size=int(round(noise * n)), replace=False).tolist())
    out = []
    for i, (text, label) in enumerate(examples):
        if i in flipped:
            label = Label.COGNITIVE if label == Label.PHYSICAL else Label.PHYSICAL
        out.append(LabeledExample(text, label))
    return out


def _graph_from_dense(weights: np.ndarray, year: int, prefix: str) -> SimilarityGraph:
    n = weights.shape[0]
    iu, ju = np.triu_indices(n, k=1)
    w = weights[iu, ju]
    keep = w > 0
    nodes = [f"{prefix}{i:05d}" for i in range(n)]
    return SimilarityGraph(
        year=year,
        nodes=nodes,
        src=iu[keep].astype(np.int64),
        dst=ju[keep].astype(np.int64),
        weight=w[keep].astype(np.float64),
        threshold=0.0,
        weighting=Weighting.EMBEDDING_COSINE,
        titles=list(nodes),
    )


def planted_polarization_graph(
    n: int = 200,
    p0: float = 0.5,
    within_weight: float = 1.0,
    between_weight: float = 0.5,
    edge_probability: float = 0.1,
    seed: int = 0,
    year: int = 2000,
    shuffle_labels: bool = False,
) -> Tuple[SimilarityGraph, Dict[str, Label]]:
    """
    Random graph whose within-class edges weigh `within_weight` and between-class
    edges `between_weight`.

    With shuffle_labels the returned labels are a random permutation of the
    planted ones, keeping p0 but destroying the structure.
    """
    rng = np.random.default_rng(seed)
    n_physical = int(round(p0 * n))
    classes = np.array([0] * n_physical + [1] * (n - n_physical))
    rng.shuffle(classes)
    present = rng.random((n, n)) < edge_probability
    same = classes[:, None] == classes[None, :]
    weights = np.where(present, np.where(same, within_weight, between_weight), 0.0)
    graph = _graph_from_dense(weights, year, f"{year}-")
    if shuffle_labels:
        classes = rng.permutation(classes)
    labels = {node: (Label.PHYSICAL if c == 0 else Label.COGNITIVE) for node, c in zip(graph.nodes, classes)}
    return graph, labels


def planted_block_graph(
    n_blocks: int = 4,
    block_size: int = 25,
    p_in: float = 0.5,
    p_out: float = 0.02,
    w_in: float = 1.0,
    w_out: float = 0.2,
    seed: int = 0,
    year: int = 2000,
) -> Tuple[SimilarityGraph, Dict[str, int]]:
    """Planted-partition graph: dense, heavy edges inside blocks, sparse light ones across."""
    rng = np.random.default_rng(seed)
    blocks = np.repeat(np.arange(n_blocks), block_size)
    n = blocks.size
    same = blocks[:, None] == blocks[None, :]
    draw = rng.random((n, n))
    weights = np.where(same, np.where(draw < p_in, w_in, 0.0), np.where(draw < p_out, w_out, 0.0))
    graph = _graph_from_dense(weights, year, "b")
    return graph, {node: int(b) for node, b in zip(graph.nodes, blocks)}


def turnover_editions(
    years: Sequence[int] = (1939, 1949, 1965, 1977, 1991),
    n_titles: int = 1200,
    rate: float = 1.67,
) -> List[EditionCorpus]:
    """
    Editions whose titles slide along one long title sequence.

    Edition year y lists titles [s(y), s(y) + n_titles) with
    s(y) = round(rate / 100 * n_titles * (y - first year)), so a pair of editions
    g years apart misses rate * g percent of each other's titles.
    """
    stopwords, digest = load_stopwords()
    first = min(years)
    out = []
    for year in years:
        start = int(round(rate / 100.0 * n_titles * (year - first)))
        entries = [
            OccupationEntry(
                entry_id=f"{year}-{k:05d}",
                title=f"OCCUPATION {start + k:06d}",
                edition_year=year,
                industries=("synth.",),
                description=f"performs task number {start + k}",
            )
            for k in range(n_titles)
        ]
        out.append(EditionCorpus.build(year, entries, stopwords, digest))
    return out


# --- RUN FIXTURE ---
FIXTURE_YEARS = (1939, 1965, 1991)
FIXTURE_PURITY = (0.6, 0.75, 0.9)


def _word_vectors(seed: int, dimension: int = 8) -> Dict[str, np.ndarray]:
    """Physical words point along axis 0, cognitive words along axis 1, plus small noise."""
    rng = np.random.default_rng(seed)
    vectors = {}
    for axis, words in ((0, PHYSICAL_WORDS), (1, COGNITIVE_WORDS)):
        for word in words:
            v = rng.normal(0.0, 0.05, size=dimension)
            v[axis] += 1.0
            vectors[word] = v
    return vectors


def _fixture_description(rng: np.random.Generator, label: Label, purity: float, length: int = 12) -> str:
    own, other = (PHYSICAL_WORDS, COGNITIVE_WORDS) if label == Label.PHYSICAL else (COGNITIVE_WORDS, PHYSICAL_WORDS)
    n_own = int(round(purity * length))
    words = list(rng.choice(own[:20], size=n_own)) + list(rng.choice(other[:20], size=length - n_own))
    rng.shuffle(words)
    words.insert(0, "worker")
    return "The " + " ".join(words) + " according to specifications."


def fixture_edition_text(year: int, purity: float, n_jobs: int = 60, seed: int = 0, offset: int = 0) -> str:
    """
    Raw transcription of one synthetic edition: a front-matter line, n_jobs entries
    (half Physical, half Cognitive), one reference entry and one duplicate.
    """
    rng = np.random.default_rng([seed, year])
    lines = [f"DICTIONARY OF OCCUPATIONAL TITLES, SYNTHETIC EDITION {year}", ""]
    for k in range(n_jobs):
        label = Label.PHYSICAL if k % 2 == 0 else Label.COGNITIVE
        number = offset + k
        title = f"PATTERN MAKER {number:04d}" if label == Label.PHYSICAL else f"OFFICE MANAGER {number:04d}"
        industry = "mach. shop" if label == Label.PHYSICAL else "clerical"
        code = f"{(number % 9) + 1}-{number % 100:02d}.{number % 1000:03d}"
        lines.append(f"{title} ({industry}) {code}. {_fixture_description(rng, label, purity)}")
    lines.append(f"TAPER {year} (const.) see PATTERN MAKER {offset:04d}.")
    first_physical = next(l for l in lines if l.startswith("PATTERN MAKER"))
    lines.append(first_physical.replace("PATTERN MAKER", "PATTERN CUTTER", 1))
    return "\n".join(lines) + "\n"


def write_run_fixture(out_dir: Path, seed: int = 0, n_jobs: int = 60, bootstrap: int = 50) -> Path:
    """
    Write raw editions, an embedding file, a training CSV, an override config,
    a lexicon and a run TOML whose output directory is `<out_dir>/output`.

    Within-class purity of the descriptions rises across the editions, so the
    adjusted polarization series rises too.

    Returns:
        Path: The run TOML.
    """
    from occnet.job_classifier.io import write_training_csv

    out_dir = Path(out_dir)
    raw_dir = out_dir / "raw"
    raw_dir.mkdir(parents=True, exist_ok=True)

    editions = []
    for idx, (year, purity) in enumerate(zip(FIXTURE_YEARS, FIXTURE_PURITY)):
        path = raw_dir / f"{year}.txt"
        path.write_text(fixture_edition_text(year, purity, n_jobs, seed, offset=idx * 5), encoding="utf-8")
        editions.append((year, path))

    vectors = _word_vectors(seed)
    dimension = len(next(iter(vectors.values())))
    with (out_dir / "vectors.txt").open("w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"{len(vectors)} {dimension}\n")
        for word, v in vectors.items():
            fh.write(word + " " + " ".join(f"{x:.6f}" for x in v) + "\n")

    training = generate_labeled_examples(n=200, noise=0.0, seed=seed, doc_length=12, class_share=1.0)
    write_training_csv(training, out_dir / "training.csv")

    (out_dir / "overrides.txt").write_text(
        "# keyword=class\nOPERATOR=Physical\nMAKER=Physical\nSUPERVISOR=Cognitive\nMANAGER=Cognitive\n",
        encoding="utf-8",
    )

    lexicon = sorted(set(PHYSICAL_WORDS + COGNITIVE_WORDS + SHARED_WORDS + ("the", "to")))
    (out_dir / "lexicon.txt").write_text("\n".join(lexicon) + "\n", encoding="utf-8")

    toml_lines = [
        'output_dir = "output"',
        "jobs = 1",
        "",
    ]
    for year, path in editions:
        toml_lines += ["[[editions]]", f"year = {year}", f'path = "raw/{path.name}"', ""]
    toml_lines += [
        "[embeddings]",
        'path = "vectors.txt"',
        "",
        "[spellcheck]",
        'lexicon = "lexicon.txt"',
        "max_samples = 20",
        "",
        "[similarity]",
        "threshold = 0.0",
        'weighting = "embedding_cosine"',
        "filter_stopwords = true",
        "",
        "[classifier]",
        'mode = "BoW"',
        "smoothing = 1.0",
        f"split_seed = {seed}",
        'training_csv = "training.csv"',
        'override_config = "overrides.txt"',
        "",
        "[polarization]",
        'baseline = "analytic"',
        'edge_mode = "weighted"',
        f"bootstrap = {bootstrap}",
        f"seed = {seed}",
        "",
        "[sweep]",
        "thresholds = [0.0, 0.3, 0.5]",
        'weightings = ["embedding_cosine"]',
        "",
    ]
    config_path = out_dir / "run.toml"
    config_path.write_text("\n".join(toml_lines), encoding="utf-8")
    logger.info("Wrote synthetic run fixture to %s", out_dir)
    return config_path
