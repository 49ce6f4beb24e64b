"""
Multinomial Naive Bayes over BoW or TF-IDF features, computed in log space.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np
from scipy.special import logsumexp

from occnet.corpus_parser.models import EditionCorpus
from occnet.corpus_parser.text import tokenize
from occnet.errors import TrainingDataError
from occnet.job_classifier.features import FeatureMode, compute_idf, featurize, parse_mode
from occnet.job_classifier.labels import (
    CLASS_ORDER,
    AssignedLabel,
    Label,
    LabeledExample,
    LabelAssignment,
    parse_label,
)

logger = logging.getLogger(__name__)

DEFAULT_ALPHA = 1.0
DEFAULT_TEST_FRACTION = 0.2


@dataclass(frozen=True)
class ClassifierModel:
    """
    Trained classifier.

    `log_likelihoods` has one row per vocabulary token and one column per class
    in CLASS_ORDER. Smoothing keeps every likelihood strictly inside (0, 1).
    """

    feature_mode: FeatureMode
    vocabulary: Tuple[str, ...]
    log_priors: np.ndarray
    log_likelihoods: np.ndarray
    smoothing_alpha: float = DEFAULT_ALPHA
    idf: Optional[Dict[str, float]] = None

    @property
    def class_priors(self) -> Dict[Label, float]:
        return {label: float(np.exp(self.log_priors[c])) for c, label in enumerate(CLASS_ORDER)}

    @property
    def token_likelihoods(self) -> Dict[str, Dict[Label, float]]:
        probs = np.exp(self.log_likelihoods)
        return {
            token: {label: float(probs[i, c]) for c, label in enumerate(CLASS_ORDER)}
            for i, token in enumerate(self.vocabulary)
        }

    @property
    def token_index(self) -> Dict[str, int]:
        return {t: i for i, t in enumerate(self.vocabulary)}

    def to_dict(self) -> Dict:
        return {
            "feature_mode": self.feature_mode.value,
            "classes": [c.value for c in CLASS_ORDER],
            "smoothing_alpha": self.smoothing_alpha,
            "log_priors": self.log_priors.tolist(),
            "vocabulary": list(self.vocabulary),
            "log_likelihoods": self.log_likelihoods.tolist(),
            "idf": self.idf,
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "ClassifierModel":
        return cls(
            feature_mode=parse_mode(data["feature_mode"]),
            vocabulary=tuple(data["vocabulary"]),
            log_priors=np.asarray(data["log_priors"], dtype=np.float64),
            log_likelihoods=np.asarray(data["log_likelihoods"], dtype=np.float64).reshape(-1, len(CLASS_ORDER)),
            smoothing_alpha=float(data["smoothing_alpha"]),
            idf=data.get("idf"),
        )


@dataclass(frozen=True)
class Prediction:
    label: Label
    posterior: float
    low_confidence: bool = False


def _check_examples(examples: Sequence[LabeledExample], minimum: int) -> None:
    counts = {label: 0 for label in CLASS_ORDER}
    for ex in examples:
        counts[parse_label(ex.label)] += 1
    present = [label for label, n in counts.items() if n > 0]
    if len(present) < 2:
        raise TrainingDataError(f"training data has a single class: {[l.value for l in present]}")
    short = [label.value for label, n in counts.items() if n < minimum]
    if short:
        raise TrainingDataError(f"need at least {minimum} examples per class; too few for {short}")


def fit_naive_bayes(
    examples: Sequence[LabeledExample],
    mode=FeatureMode.BOW,
    alpha: float = DEFAULT_ALPHA,
) -> ClassifierModel:
    """
    Fit a multinomial Naive Bayes model on all given examples.

    Feature values are accumulated per class in example order; likelihoods use
    additive smoothing: (F_tc + alpha) / (sum_t F_tc + alpha * |V|).
    """
    mode = parse_mode(mode)
    if alpha <= 0:
        raise TrainingDataError(f"smoothing alpha must be positive, got {alpha}")
    _check_examples(examples, 1)

    docs = [tokenize(ex.description) for ex in examples]
    vocabulary = tuple(sorted({t for doc in docs for t in doc}))
    index = {t: i for i, t in enumerate(vocabulary)}
    idf = compute_idf(docs) if mode == FeatureMode.TFIDF else None

    totals = np.zeros((len(vocabulary), len(CLASS_ORDER)), dtype=np.float64)
    class_counts = np.zeros(len(CLASS_ORDER), dtype=np.float64)
    for ex in examples:
        c = CLASS_ORDER.index(parse_label(ex.label))
        class_counts[c] += 1
        for token, value in featurize(ex.description, mode, idf=idf).items():
            totals[index[token], c] += value

    smoothed = totals + alpha
    log_likelihoods = np.log(smoothed) - np.log(smoothed.sum(axis=0, keepdims=True))
    log_priors = np.log(class_counts / class_counts.sum())
    return ClassifierModel(
        feature_mode=mode,
        vocabulary=vocabulary,
        log_priors=log_priors,
        log_likelihoods=log_likelihoods,
        smoothing_alpha=alpha,
        idf=idf,
    )


def classify(model: ClassifierModel, description: str, token_index: Optional[Dict[str, int]] = None) -> Prediction:
    """
    Most probable class of a description.

    Ties go to Physical. A description with no known token is classified from the
    priors alone and flagged low-confidence.
    """
    index = token_index if token_index is not None else model.token_index
    features = featurize(description, model.feature_mode, vocabulary=index, idf=model.idf)
    scores = model.log_priors.copy()
    for token in sorted(features):
        scores += features[token] * model.log_likelihoods[index[token]]

    best = int(np.argmax(scores))
    posterior = float(np.exp(scores[best] - logsumexp(scores)))
    return Prediction(CLASS_ORDER[best], posterior, low_confidence=not features)


def accuracy_on(model: ClassifierModel, examples: Sequence[LabeledExample]) -> float:
    if not examples:
        return float("nan")
    index = model.token_index
    hits = sum(1 for ex in examples if classify(model, ex.description, index).label == parse_label(ex.label))
    return hits / len(examples)


def split_examples(
    examples: Sequence[LabeledExample],
    split_seed: int,
    test_fraction: float = DEFAULT_TEST_FRACTION,
) -> Tuple[List[LabeledExample], List[LabeledExample]]:
    """Seeded shuffle, then the first `test_fraction` share is held out."""
    order = np.random.default_rng(split_seed).permutation(len(examples))
    n_test = max(1, int(round(test_fraction * len(examples))))
    test = [examples[i] for i in order[:n_test]]
    train_part = [examples[i] for i in order[n_test:]]
    return train_part, test


def train(
    examples: Sequence[LabeledExample],
    mode=FeatureMode.BOW,
    split_seed: int = 0,
    alpha: float = DEFAULT_ALPHA,
    test_fraction: float = DEFAULT_TEST_FRACTION,
) -> Tuple[ClassifierModel, float]:
    """
    Train on a seeded 80/20 split and report held-out accuracy.

    Args:
        examples (list of LabeledExample): At least two examples per class.
        mode (FeatureMode): BoW or TFIDF.
        split_seed (int): Seed of the train/test shuffle.
        alpha (float): Additive smoothing.
        test_fraction (float): Held-out share.

    Returns:
        tuple: (ClassifierModel, held-out accuracy)

    Raises:
        TrainingDataError: Single-class input or fewer than two examples per class.
    """
    _check_examples(examples, 2)
    train_part, test = split_examples(examples, split_seed, test_fraction)
    model = fit_naive_bayes(train_part, mode, alpha)
    accuracy = accuracy_on(model, test)
    logger.info(
        "Trained %s Naive Bayes on %d examples; held-out accuracy %.4f on %d",
        model.feature_mode.value, len(train_part), accuracy, len(test),
    )
    return model, accuracy


def classify_corpus(model: ClassifierModel, corpus: EditionCorpus, jobs: int = 1) -> LabelAssignment:
    """Label every entry that has a description, in corpus order."""
    index = model.token_index
    entries = [e for e in corpus.entries if e.description]

    def run(entry) -> AssignedLabel:
        pred = classify(model, entry.description, index)
        return AssignedLabel(pred.label, pred.posterior, False, pred.low_confidence, pred.label)

    if jobs > 1 and len(entries) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            labels = list(pool.map(run, entries))
    else:
        labels = [run(e) for e in entries]

    assignment = LabelAssignment({e.entry_id: lab for e, lab in zip(entries, labels)})
    low = sum(1 for a in labels if a.low_confidence)
    if low:
        logger.warning("Edition %d: %d entries classified from priors only", corpus.year, low)
    return assignment
