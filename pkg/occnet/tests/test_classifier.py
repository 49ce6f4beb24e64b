import logging
import math

import numpy as np
import pytest

from occnet.errors import ConfigError, LabelError, TrainingDataError
from occnet.job_classifier.features import FeatureMode, compute_idf, featurize, parse_mode
from occnet.job_classifier.io import (
    load_model,
    load_training_csv,
    read_assignment_csv,
    save_model,
    write_assignment_csv,
)
from occnet.job_classifier.labels import AssignedLabel, Label, LabeledExample, LabelAssignment, class_balance
from occnet.job_classifier.naive_bayes import classify, fit_naive_bayes, split_examples, train
from occnet.job_classifier.overrides import apply_title_overrides, load_override_config, title_class
from occnet.job_classifier.validation import evaluate_against_manual, metadata_validation, worker_function_digits
from occnet.synthetic import generate_labeled_examples

P, C = Label.PHYSICAL, Label.COGNITIVE


# --- FEATURES ---
def test_bow_counts():
    assert featurize("lathe lathe operator", FeatureMode.BOW) == {"lathe": 2.0, "operator": 1.0}


def test_unknown_tokens_are_ignored():
    assert featurize("lathe welder", FeatureMode.BOW, vocabulary={"lathe"}) == {"lathe": 1.0}


def test_idf_of_four_documents():
    idf = compute_idf([["lathe"], ["lathe", "metal"], ["paper"], ["walls"]])
    assert idf["lathe"] == pytest.approx(math.log(2))
    assert idf["paper"] == pytest.approx(math.log(4))
    features = featurize("lathe lathe", FeatureMode.TFIDF, idf=idf)
    assert features["lathe"] == pytest.approx(2 * math.log(2))


def test_parse_mode_is_case_insensitive():
    assert parse_mode("bow") is FeatureMode.BOW
    assert parse_mode("TfIdf") is FeatureMode.TFIDF
    with pytest.raises(ValueError):
        parse_mode("bert")


# --- TRAINING AND CLASSIFICATION ---
def hand_model():
    return fit_naive_bayes(
        [LabeledExample("lathe metal welds", P), LabeledExample("directs workers schedules", C)],
        FeatureMode.BOW,
        alpha=1.0,
    )


def test_hand_built_posterior():
    model = hand_model()
    assert len(model.vocabulary) == 6
    # Cognitive likelihoods are 2/9 for its tokens and 1/9 for the others
    prediction = classify(model, "directs workers schedules")
    assert prediction.label is C
    assert prediction.posterior == pytest.approx(8 / 9, abs=1e-12)


def test_model_invariants():
    model = hand_model()
    assert sum(model.class_priors.values()) == pytest.approx(1.0)
    for per_class in model.token_likelihoods.values():
        assert all(0.0 < p < 1.0 for p in per_class.values())
    assert set(model.token_likelihoods) == set(model.vocabulary)


def test_single_indicative_token():
    assert classify(hand_model(), "lathe").label is P


def test_no_known_token_falls_back_to_priors():
    prediction = classify(hand_model(), "zzz qqq")
    assert prediction.label is P
    assert prediction.posterior == pytest.approx(0.5)
    assert prediction.low_confidence


def test_scaling_counts_keeps_the_label():
    examples = generate_labeled_examples(n=100, noise=0.0, seed=4)
    model = fit_naive_bayes(examples, FeatureMode.BOW)
    for ex in examples[:20]:
        base = classify(model, ex.description)
        tripled = classify(model, " ".join([ex.description] * 3))
        assert tripled.label is base.label
        assert np.isfinite(math.log(tripled.posterior))


def test_single_class_training_is_an_error():
    examples = [LabeledExample(f"lathe metal {i}", P) for i in range(10)]
    with pytest.raises(TrainingDataError):
        train(examples, FeatureMode.BOW)


def test_one_example_of_a_class_is_too_few():
    examples = [LabeledExample(f"lathe metal {i}", P) for i in range(10)] + [LabeledExample("directs", C)]
    with pytest.raises(TrainingDataError):
        train(examples, FeatureMode.BOW)


@pytest.mark.parametrize("mode", [FeatureMode.BOW, FeatureMode.TFIDF])
def test_separable_corpus_is_learned_exactly(mode):
    examples = generate_labeled_examples(n=200, noise=0.0, seed=1, class_share=1.0)
    _, accuracy = train(examples, mode, split_seed=0)
    assert accuracy == 1.0


@pytest.mark.parametrize("mode", [FeatureMode.BOW, FeatureMode.TFIDF])
def test_noisy_corpus_accuracy(mode):
    examples = generate_labeled_examples(n=672, noise=0.1, seed=0)
    _, accuracy = train(examples, mode, split_seed=0)
    assert 0.85 <= accuracy <= 0.95


def test_training_is_reproducible():
    examples = generate_labeled_examples(n=300, noise=0.1, seed=9)
    a, acc_a = train(examples, FeatureMode.TFIDF, split_seed=3)
    b, acc_b = train(examples, FeatureMode.TFIDF, split_seed=3)
    assert acc_a == acc_b
    np.testing.assert_array_equal(a.log_likelihoods, b.log_likelihoods)


def test_split_holds_out_a_fifth():
    examples = generate_labeled_examples(n=100, seed=2)
    train_part, test = split_examples(examples, 0)
    assert (len(train_part), len(test)) == (80, 20)


def test_model_file_reloads(tmp_path):
    model, accuracy = train(generate_labeled_examples(n=100, seed=5), FeatureMode.TFIDF)
    path = tmp_path / "model.json"
    save_model(model, accuracy, path)
    loaded = load_model(path)
    assert loaded.vocabulary == model.vocabulary
    text = "operates lathe and files reports"
    assert classify(loaded, text) == classify(model, text)


def test_training_csv_errors_name_the_row(tmp_path):
    path = tmp_path / "training.csv"
    path.write_text("description,label\nturns metal,Physical\nplans work,Managerial\n", encoding="utf-8")
    with pytest.raises(TrainingDataError, match=":3:"):
        load_training_csv(path)


# --- TITLE OVERRIDES ---
def assignment_of(labels):
    return LabelAssignment({k: AssignedLabel(v, 0.8, model_label=v) for k, v in labels.items()})


def test_supervisor_title_becomes_cognitive():
    assignment = assignment_of({"a": P})
    out = apply_title_overrides(assignment, {"a": "SUPERVISOR, BRIDGES AND BUILDINGS"})
    assert out["a"].label is C
    assert out["a"].override_applied
    assert out["a"].model_label is P
    assert out["a"].posterior == 0.8


def test_title_without_keyword_is_unchanged():
    assignment = assignment_of({"a": P})
    assert apply_title_overrides(assignment, {"a": "PAPER HANGER"}) == assignment


def test_conflicting_keywords_leave_the_label(caplog):
    assignment = assignment_of({"a": C})
    with caplog.at_level(logging.WARNING):
        out = apply_title_overrides(assignment, {"a": "SUPERVISOR, MACHINE OPERATOR"})
    assert out == assignment
    assert any("Conflicting" in r.message for r in caplog.records)


def test_keywords_match_whole_words_only():
    overrides = {"MAKER": P}
    assert title_class("pattern maker", overrides) is P
    assert title_class("DRESSMAKER", overrides) is None


def test_overrides_are_idempotent():
    assignment = assignment_of({"a": P, "b": P, "c": C})
    titles = {"a": "OFFICE MANAGER", "b": "LATHE OPERATOR", "c": "CLERK"}
    once = apply_title_overrides(assignment, titles)
    assert apply_title_overrides(once, titles) == once


def test_override_config_file(tmp_path):
    path = tmp_path / "overrides.txt"
    path.write_text("# comment\nforeman = Cognitive\nHELPER=physical  # trailing\n", encoding="utf-8")
    assert load_override_config(path) == {"FOREMAN": C, "HELPER": P}
    path.write_text("FOREMAN Cognitive\n", encoding="utf-8")
    with pytest.raises(ConfigError, match=":1:"):
        load_override_config(path)


def test_assignment_csv_reloads(tmp_path):
    assignment = apply_title_overrides(assignment_of({"a": P, "b": C}), {"a": "OFFICE MANAGER", "b": "CLERK"})
    path = tmp_path / "labels.csv"
    write_assignment_csv(assignment, {"a": "OFFICE MANAGER", "b": "CLERK"}, path)
    loaded = read_assignment_csv(path)
    assert loaded.labels() == assignment.labels()
    assert loaded["a"].override_applied and not loaded["b"].override_applied


def test_class_balance():
    assert class_balance(assignment_of({"a": P, "b": P, "c": C, "d": P})) == {"Physical": 0.75, "Cognitive": 0.25}


# --- METADATA AND MANUAL VALIDATION ---
def test_worker_function_digits():
    assert worker_function_digits("652.382-010") == (3, 8, 2)
    assert worker_function_digits("6-78.101") is None
    assert worker_function_digits(None) is None


def test_all_physical_is_one_hundred_percent():
    assignment = assignment_of({f"e{i}": P for i in range(6)})
    codes = {f"e{i}": f"600.{i}{i}{i}-010" for i in range(6)}
    result = metadata_validation(assignment, codes, bootstrap_n=200, year=1965)
    assert result.rows
    assert all(row.pct_physical == 100.0 for row in result.rows)
    assert all(row.ci_low == 100.0 and row.ci_high == 100.0 for row in result.rows)


def test_twenty_entry_tally():
    labels = {f"e{i}": (P if i < 7 or 10 <= i < 12 else C) for i in range(20)}
    codes = {f"e{i}": ("100.128-010" if i < 10 else "100.562-010") for i in range(20)}
    codes["e19"] = "bad"
    result = metadata_validation(assignment_of(labels), codes, bootstrap_n=500, seed=1, year=1977)
    rows = {(r.axis, r.value): r for r in result.rows}
    assert rows[("Data", 1)].n == 10
    assert rows[("Data", 1)].pct_physical == pytest.approx(70.0)
    assert rows[("Data", 5)].n == 9
    assert rows[("Data", 5)].pct_physical == pytest.approx(200 / 9)
    assert rows[("Things", 8)].name == "No significant relationship"
    assert rows[("People", 2)].name == "Instructing"
    assert result.skipped_ids == ["e19"]
    for row in result.rows:
        assert row.ci_low <= row.pct_physical <= row.ci_high


def test_manual_agreement():
    labels = {f"e{i}": P if i % 2 else C for i in range(40)}
    assignment = assignment_of(labels)
    assert evaluate_against_manual(assignment, list(labels.items())) == 1.0
    manual = [(k, (C if v is P else P) if i < 3 else v) for i, (k, v) in enumerate(labels.items())]
    assert evaluate_against_manual(assignment, manual) == pytest.approx(0.925)
    inverted = [(k, (C if v is P else P) if i % 2 else v) for i, (k, v) in enumerate(labels.items())]
    assert evaluate_against_manual(assignment, inverted) == 0.5


def test_manual_ids_must_exist():
    with pytest.raises(LabelError, match="x1"):
        evaluate_against_manual(assignment_of({"a": P}), [("a", P), ("x1", C)])
