"""
Pipeline stages. Every stage reads its inputs from the output directory written
by the stages before it and writes its own artifacts there.
"""

import logging
from dataclasses import asdict, dataclass
from functools import cached_property
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import pandas as pd

from occnet.config.run_config import RunConfig
from occnet.corpus_parser.dedupe import dedupe_with_report
from occnet.corpus_parser.grammar import GrammarConfig, load_grammar_config
from occnet.corpus_parser.io import read_corpus_jsonl, read_json, write_corpus_jsonl, write_json
from occnet.corpus_parser.models import EditionCorpus
from occnet.corpus_parser.parser import parse_editions
from occnet.corpus_parser.spelling import load_lexicon, validate_spelling
from occnet.errors import ConfigError, DataError, GraphError, RegressionError
from occnet.job_classifier.io import (
    load_manual_labels,
    load_model,
    load_training_csv,
    read_assignment_csv,
    save_model,
    write_assignment_csv,
    write_worker_functions_csv,
)
from occnet.job_classifier.labels import LabelAssignment, class_balance
from occnet.job_classifier.naive_bayes import classify_corpus, train
from occnet.job_classifier.overrides import apply_title_overrides, load_override_config
from occnet.job_classifier.validation import WORKER_FUNCTION_YEARS, evaluate_against_manual, metadata_validation
from occnet.longitudinal.decay import similarity_decay
from occnet.longitudinal.persistence import TitleMatching, title_persistence
from occnet.longitudinal.regression import linear_regression
from occnet.polarization.bootstrap import compare_bootstrap
from occnet.polarization.grid import GridSpec
from occnet.polarization.louvain import louvain_communities
from occnet.polarization.modularity import ModularityInput
from occnet.polarization.report import (
    PolarizationReport,
    adjusted_polarization,
    write_bootstrap_csv,
    write_report_json,
    write_summary_csv,
)
from occnet.text_similarity.embeddings import EmbeddingModel, load_embeddings
from occnet.text_similarity.graph import SimilarityGraph, build_similarity_graph, embed_corpus
from occnet.text_similarity.io import read_graph, write_graph, write_vectors
from occnet.text_similarity.similarity import Weighting, parse_weighting

logger = logging.getLogger(__name__)

SWEEP_COLUMNS = ["weighting", "threshold", "year", "n_nodes", "n_edges", "p0", "Q", "Q_rand", "Q_bar"]


@dataclass(frozen=True)
class OutputLayout:
    """Where each artifact lives below the output directory."""

    root: Path

    def corpus(self, year: int) -> Path:
        return self.root / "corpus" / f"{year}.jsonl"

    def dedup_corpus(self, year: int) -> Path:
        return self.root / "corpus" / f"{year}.dedup.jsonl"

    def dedupe_report(self, year: int) -> Path:
        return self.root / "corpus" / f"{year}.dedupe.json"

    def spelling(self, year: int) -> Path:
        return self.root / "spelling" / f"{year}.json"

    def vectors(self, year: int) -> Path:
        return self.root / "embeddings" / f"{year}.npy"

    def vector_ids(self, year: int) -> Path:
        return self.root / "embeddings" / f"{year}.ids.json"

    @property
    def model(self) -> Path:
        return self.root / "classifier" / "model.json"

    @property
    def manual_evaluation(self) -> Path:
        return self.root / "classifier" / "manual_evaluation.json"

    def labels(self, year: int) -> Path:
        return self.root / "labels" / f"{year}.csv"

    def worker_functions(self, year: int) -> Path:
        return self.root / "labels" / f"{year}.worker_functions.csv"

    def edges(self, year: int) -> Path:
        return self.root / "graphs" / f"{year}.edges.tsv"

    def nodes(self, year: int) -> Path:
        return self.root / "graphs" / f"{year}.nodes.json"

    def report(self, year: int) -> Path:
        return self.root / "polarization" / f"{year}.json"

    def bootstrap(self, year: int) -> Path:
        return self.root / "polarization" / f"{year}.bootstrap.csv"

    def louvain(self, year: int) -> Path:
        return self.root / "polarization" / f"{year}.louvain.json"

    def table(self, name: str) -> Path:
        return self.root / "tables" / name


class StageContext:
    """Config, layout and the lazily loaded shared inputs of one run."""

    def __init__(self, config: RunConfig):
        self.config = config
        self.layout = OutputLayout(Path(config.output_dir))

    @cached_property
    def grammar(self) -> GrammarConfig:
        return load_grammar_config(self.config.grammar)

    @property
    def stopwords_hash(self) -> str:
        return self.grammar.stopwords_hash

    def read_corpus(self, year: int, dedup: bool = True) -> EditionCorpus:
        path = self.layout.dedup_corpus(year) if dedup else self.layout.corpus(year)
        return read_corpus_jsonl(path, year, self.grammar.stopwords, self.grammar.stopwords_hash)

    def corpora(self, dedup: bool = True) -> List[EditionCorpus]:
        return [self.read_corpus(year, dedup) for year in self.config.years]

    def read_labels(self, year: int) -> LabelAssignment:
        path = self.layout.labels(year)
        if not path.exists():
            raise DataError(f"missing label file: {path} (run classify first)")
        return read_assignment_csv(path)

    def embedding_model(self, corpora: Sequence[EditionCorpus]) -> EmbeddingModel:
        if self.config.embeddings is None:
            raise ConfigError("embeddings path is required for embedding_cosine similarity")
        vocab = set()
        for corpus in corpora:
            vocab.update(corpus.vocab)
        return load_embeddings(self.config.embeddings, restrict_to=vocab)


def _require_editions(ctx: StageContext) -> None:
    if not ctx.config.editions:
        raise ConfigError("no editions configured")


def _write_frame(frame: pd.DataFrame, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, lineterminator="\n")


# --- PARSE ---
def run_parse(ctx: StageContext) -> List[EditionCorpus]:
    """Parse every edition, deduplicate it and write the edition statistics table."""
    _require_editions(ctx)
    sources = [(e.path, e.year) for e in ctx.config.editions]
    corpora = parse_editions(sources, ctx.grammar, ctx.config.jobs)

    rows = []
    deduped = []
    for corpus in corpora:
        write_corpus_jsonl(corpus, ctx.layout.corpus(corpus.year))
        clean, report = dedupe_with_report(corpus)
        write_corpus_jsonl(clean, ctx.layout.dedup_corpus(corpus.year))
        write_json(report.to_dict(), ctx.layout.dedupe_report(corpus.year))
        row = {"year": corpus.year}
        row.update(corpus.stats.to_dict())
        row["deduplicated_entries"] = report.retained
        rows.append(row)
        deduped.append(clean)
        logger.info("Edition %d: %d entries parsed, %d kept after deduplication",
                    corpus.year, corpus.stats.total_entries, report.retained)

    _write_frame(pd.DataFrame(rows), ctx.layout.table("edition_stats.csv"))
    return deduped


# --- SPELLCHECK ---
def run_spellcheck(ctx: StageContext) -> None:
    _require_editions(ctx)
    lexicon = load_lexicon(ctx.config.spellcheck.lexicon)
    rows = []
    for corpus in ctx.corpora(dedup=False):
        report = validate_spelling(corpus, lexicon, ctx.config.spellcheck.max_samples)
        write_json(report.to_dict(), ctx.layout.spelling(corpus.year))
        rows.append({
            "year": report.edition_year,
            "misspelled_count": report.misspelled_count,
            "total_words": report.total_words,
            "accuracy_rate": report.accuracy_rate,
        })
    _write_frame(pd.DataFrame(rows), ctx.layout.table("spelling.csv"))


# --- CLASSIFY ---
def run_classify(ctx: StageContext) -> Dict[int, LabelAssignment]:
    """
    Train on the labelled CSV (or reuse a saved model), label every edition and
    run the worker-function and manual-label checks where their inputs exist.
    """
    _require_editions(ctx)
    clf = ctx.config.classifier
    if clf.training_csv is not None:
        model, accuracy = train(load_training_csv(clf.training_csv), clf.mode, clf.split_seed,
                                clf.smoothing, clf.test_fraction)
        save_model(model, accuracy, ctx.layout.model)
    elif ctx.layout.model.exists():
        model = load_model(ctx.layout.model)
        logger.info("Reusing saved classifier %s", ctx.layout.model)
    else:
        raise ConfigError("classifier.training_csv is required when no saved model exists")

    override_config = load_override_config(clf.override_config) if clf.override_config else None
    assignments: Dict[int, LabelAssignment] = {}
    balance_rows = []
    for corpus in ctx.corpora():
        assignment = classify_corpus(model, corpus, ctx.config.jobs)
        titles = {e.entry_id: e.title for e in corpus.entries}
        if clf.apply_overrides:
            assignment = apply_title_overrides(assignment, titles, override_config)
        write_assignment_csv(assignment, titles, ctx.layout.labels(corpus.year))
        assignments[corpus.year] = assignment

        balance = class_balance(assignment)
        balance_rows.append({"year": corpus.year, "n": len(assignment), **balance})

        if corpus.year in WORKER_FUNCTION_YEARS and corpus.stats.entries_with_code:
            codes = {e.entry_id: e.code or "" for e in corpus.entries}
            validation = metadata_validation(assignment, codes, seed=ctx.config.polarization.seed, year=corpus.year)
            write_worker_functions_csv(validation, ctx.layout.worker_functions(corpus.year))

    _write_frame(pd.DataFrame(balance_rows), ctx.layout.table("class_balance.csv"))

    if clf.manual_labels is not None:
        manual = load_manual_labels(clf.manual_labels)
        merged = {}
        for assignment in assignments.values():
            merged.update(assignment.items())
        agreement = evaluate_against_manual(LabelAssignment(merged), manual)
        write_json({"n": len(manual), "agreement": agreement}, ctx.layout.manual_evaluation)
    return assignments


# --- EMBED ---
def run_embed(ctx: StageContext) -> None:
    _require_editions(ctx)
    corpora = ctx.corpora()
    model = ctx.embedding_model(corpora)
    rows = []
    for corpus in corpora:
        vectors = embed_corpus(corpus, model, ctx.config.similarity.filter_stopwords)
        write_vectors(vectors, ctx.layout.vectors(corpus.year), ctx.layout.vector_ids(corpus.year))
        covered = sum(v.covered_tokens for v in vectors)
        total = sum(v.total_tokens for v in vectors)
        rows.append({
            "year": corpus.year,
            "descriptions": len(vectors),
            "empty_vectors": sum(1 for v in vectors if v.is_empty),
            "token_coverage": covered / total if total else 0.0,
        })
    _write_frame(pd.DataFrame(rows), ctx.layout.table("embedding_coverage.csv"))


# --- GRAPH ---
def _graphs(ctx: StageContext, corpora: Sequence[EditionCorpus], threshold: float,
            weighting: Weighting) -> List[SimilarityGraph]:
    model = ctx.embedding_model(corpora) if weighting == Weighting.EMBEDDING_COSINE else None
    sim = ctx.config.similarity
    return [
        build_similarity_graph(corpus, model, threshold, weighting, sim.filter_stopwords, ctx.config.jobs)
        for corpus in corpora
    ]


def run_graph(ctx: StageContext) -> None:
    _require_editions(ctx)
    sim = ctx.config.similarity
    for graph in _graphs(ctx, ctx.corpora(), sim.threshold, parse_weighting(sim.weighting)):
        labels_path = ctx.layout.labels(graph.year)
        labels = None
        if labels_path.exists():
            labels = {k: v.label.value for k, v in read_assignment_csv(labels_path).items()}
        write_graph(graph, ctx.layout.edges(graph.year), ctx.layout.nodes(graph.year), labels)


# --- POLARIZE ---
def _grid_spec(ctx: StageContext) -> GridSpec:
    pol = ctx.config.polarization
    return GridSpec(side=pol.side, degree=pol.degree, seed=pol.grid_seed, draws=pol.draws)


def _classifier_provenance(ctx: StageContext) -> Dict:
    if not ctx.layout.model.exists():
        return {}
    data = read_json(ctx.layout.model)
    return {
        "model": ctx.layout.model.relative_to(ctx.layout.root).as_posix(),
        "feature_mode": data.get("feature_mode"),
        "held_out_accuracy": data.get("held_out_accuracy"),
    }


def run_polarize(ctx: StageContext) -> List[PolarizationReport]:
    """Q, the grid baseline, Q_bar, the bootstrap CI and Louvain modules per edition."""
    _require_editions(ctx)
    pol = ctx.config.polarization
    provenance = _classifier_provenance(ctx)
    reports = []
    for year in ctx.config.years:
        graph = read_graph(ctx.layout.edges(year), ctx.layout.nodes(year))
        assignment = ctx.read_labels(year)
        data = ModularityInput(graph, assignment.labels(), pol.edge_mode)
        report = adjusted_polarization(data, pol.baseline, _grid_spec(ctx), pol.bootstrap, pol.seed,
                                       provenance, ctx.config.jobs)
        write_report_json(report, ctx.layout.report(year))
        if report.bootstrap is not None:
            write_bootstrap_csv(report.bootstrap, ctx.layout.bootstrap(year))
        if pol.louvain:
            result = louvain_communities(graph, data.labels, seed=pol.seed)
            write_json(result.to_dict(), ctx.layout.louvain(year))
        reports.append(report)

    write_summary_csv(reports, ctx.layout.table("polarization_summary.csv"))

    comparisons = [
        asdict(compare_bootstrap(a.bootstrap, b.bootstrap, a.year, b.year))
        for a, b in zip(reports, reports[1:])
        if a.bootstrap is not None and b.bootstrap is not None
    ]
    if comparisons:
        _write_frame(pd.DataFrame(comparisons), ctx.layout.table("bootstrap_comparison.csv"))
    return reports


# --- LONGITUDINAL ---
def _regression_entry(table) -> Dict:
    try:
        return linear_regression(table.points()).to_dict()
    except RegressionError as e:
        logger.warning("Regression skipped: %s", e)
        return {"error": str(e)}


def run_longitudinal(ctx: StageContext) -> None:
    """Title persistence, similarity decay and their regressions on gap years."""
    lon = ctx.config.longitudinal
    matching = TitleMatching(dedup=lon.dedup, alt_titles=lon.alt_titles)
    persistence = title_persistence(ctx.corpora(dedup=False), matching)
    _write_frame(persistence.to_frame(), ctx.layout.table("persistence.csv"))
    regressions = {"persistence": _regression_entry(persistence), "decay": None}

    if ctx.config.embeddings is None:
        logger.warning("No embeddings configured; similarity decay skipped")
    else:
        corpora = ctx.corpora()
        decay = similarity_decay(corpora, ctx.embedding_model(corpora),
                                 ctx.config.similarity.filter_stopwords, ctx.config.jobs)
        _write_frame(decay.to_frame(), ctx.layout.table("similarity_decay.csv"))
        _write_frame(decay.maxima_frame(), ctx.layout.table("similarity_maxima.csv"))
        regressions["decay"] = _regression_entry(decay)

    write_json(regressions, ctx.layout.table("regressions.json"))


# --- SWEEP ---
def run_sweep(ctx: StageContext, thresholds: Optional[Sequence[float]] = None,
              weightings: Optional[Sequence[str]] = None) -> pd.DataFrame:
    """
    Polarization per (weighting, threshold, edition) in long format.

    Each weighting's graphs are built once at the lowest threshold and filtered
    upwards. No bootstrap is run.

    Raises:
        ConfigError: Empty threshold list.
    """
    _require_editions(ctx)
    thresholds = sorted(float(t) for t in (thresholds if thresholds is not None else ctx.config.sweep.thresholds))
    if not thresholds:
        raise ConfigError("sweep needs at least one threshold")
    weightings = list(weightings or ctx.config.sweep.weightings or [ctx.config.similarity.weighting])
    pol = ctx.config.polarization

    corpora = ctx.corpora()
    labels = {year: ctx.read_labels(year).labels() for year in ctx.config.years}
    rows = []
    for name in weightings:
        weighting = parse_weighting(name)
        base_graphs = _graphs(ctx, corpora, thresholds[0], weighting)
        for threshold in thresholds:
            for base in base_graphs:
                graph = base.with_threshold(threshold)
                row = {"weighting": weighting.value, "threshold": threshold, "year": graph.year,
                       "n_nodes": graph.n_nodes, "n_edges": graph.edge_count}
                try:
                    data = ModularityInput(graph, labels[graph.year], pol.edge_mode)
                    report = adjusted_polarization(data, pol.baseline, _grid_spec(ctx), B=0)
                    row.update({"p0": report.p0, "Q": report.Q, "Q_rand": report.Q_rand, "Q_bar": report.Q_bar})
                except GraphError as e:
                    logger.warning("Sweep %s @ %.3f, edition %d: %s", weighting.value, threshold, graph.year, e)
                    row.update({"p0": None, "Q": None, "Q_rand": None, "Q_bar": None})
                rows.append(row)

    frame = pd.DataFrame(rows, columns=SWEEP_COLUMNS)
    _write_frame(frame, ctx.layout.table("sweep.csv"))
    return frame
