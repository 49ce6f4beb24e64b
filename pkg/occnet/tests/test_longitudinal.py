import numpy as np
import pytest

from occnet.corpus_parser.models import EditionCorpus, OccupationEntry
from occnet.corpus_parser.text import load_stopwords
from occnet.errors import DataError, RegressionError
from occnet.longitudinal.decay import similarity_decay
from occnet.longitudinal.persistence import TitleMatching, title_persistence, title_set
from occnet.longitudinal.regression import linear_regression, regress_decay, regress_persistence
from occnet.synthetic import turnover_editions
from occnet.text_similarity.embeddings import EmbeddingModel

STOPWORDS, STOPWORDS_HASH = load_stopwords()


def edition(year, rows):
    entries = [
        OccupationEntry(entry_id=f"{year}-{i:05d}", title=title, edition_year=year, description=description,
                        alt_titles=tuple(alts))
        for i, (title, description, alts) in enumerate(rows)
    ]
    return EditionCorpus.build(year, entries, STOPWORDS, STOPWORDS_HASH)


# --- REGRESSION ---
def test_collinear_points_are_fitted_exactly():
    result = linear_regression([(0, 1.0), (10, 21.0), (26, 53.0), (52, 105.0)])
    assert abs(result.slope - 2.0) <= 1e-10
    assert abs(result.intercept - 1.0) <= 1e-10
    assert result.r == pytest.approx(1.0, abs=1e-12)
    assert result.n_points == 4


def test_noisy_fit_reports_a_p_value():
    rng = np.random.default_rng(1)
    x = np.arange(30, dtype=float)
    result = linear_regression(list(zip(x, 0.5 * x + rng.normal(scale=2.0, size=30))))
    assert 0.0 <= result.p_value < 0.01
    assert -1.0 <= result.r <= 1.0


def test_flat_response_has_zero_correlation():
    result = linear_regression([(1, 3.0), (2, 3.0), (3, 3.0)])
    assert result.slope == 0.0
    assert (result.r, result.p_value) == (0.0, 1.0)


@pytest.mark.parametrize(
    "points",
    [[(1, 2.0), (2, 3.0)], [(5, 1.0), (5, 2.0), (5, 3.0)], [(1, 1.0), (2, float("nan")), (3, 2.0)]],
)
def test_regression_errors(points):
    with pytest.raises(RegressionError):
        linear_regression(points)


# --- TITLE PERSISTENCE ---
def test_turnover_slope_is_recovered():
    table = title_persistence(turnover_editions(rate=1.67))
    assert len(table.rows) == 20
    fit = regress_persistence(table)
    assert fit.slope == pytest.approx(1.67, abs=0.1)
    assert fit.p_value < 0.001


def test_persistence_of_two_small_editions():
    first = edition(1939, [("LATHE HAND", "turns metal", ()), ("PAPER HANGER", "covers walls", ()),
                           ("TAPER", "", ())])
    second = edition(1965, [("LATHE HAND", "turns metal", ()), ("DATA TYPIST", "types data", ())])
    table = title_persistence([second, first])
    rows = {(r.focal_year, r.other_year): r for r in table.rows}
    assert list(rows) == [(1939, 1965), (1965, 1939)]
    assert rows[(1939, 1965)].absent_titles == 2
    assert rows[(1939, 1965)].pct_titles_absent == pytest.approx(200 / 3)
    assert rows[(1965, 1939)].pct_titles_present == 50.0
    assert rows[(1965, 1939)].gap_years == 26
    assert list(table.to_frame().columns)[:3] == ["focal_year", "other_year", "gap_years"]


def test_matching_options_change_the_title_set():
    corpus = edition(1939, [("LATHE HAND", "turns metal", ("TURNER",)), ("LATHE HAND.", "turns metal", ()),
                            ("TAPER", "", ())])
    assert title_set(corpus) == {"LATHE HAND", "TAPER"}
    assert title_set(corpus, TitleMatching(alt_titles=True)) == {"LATHE HAND", "TAPER", "TURNER"}
    assert title_set(corpus, TitleMatching(dedup=True)) == {"LATHE HAND"}


def test_persistence_needs_two_distinct_editions():
    one = edition(1939, [("LATHE HAND", "turns metal", ())])
    with pytest.raises(DataError):
        title_persistence([one])
    with pytest.raises(DataError):
        title_persistence([one, edition(1939, [("CLERK", "files papers", ())])])


# --- SIMILARITY DECAY ---
def test_decay_of_drifting_descriptions():
    model = EmbeddingModel.from_vectors({"metal": [1.0, 0.0], "wood": [0.6, 0.8], "paper": [0.0, 1.0]})
    editions = [
        edition(1939, [("LATHE HAND", "metal", ()), ("CLERK", "paper", ())]),
        edition(1965, [("LATHE HAND", "wood", ()), ("CLERK", "paper", ())]),
        edition(1991, [("LATHE HAND", "paper", ())]),
    ]
    table = similarity_decay(editions, model)
    rows = {(r.focal_year, r.other_year): r for r in table.rows}
    assert len(rows) == 6
    assert rows[(1939, 1965)].mean_max_similarity == pytest.approx(0.8)
    assert rows[(1991, 1939)].mean_max_similarity == pytest.approx(1.0)
    assert rows[(1939, 1991)].mean_max_similarity == pytest.approx(0.5)
    assert len(table.maxima) == sum(r.n_focal for r in table.rows)

    threaded = similarity_decay(editions, model, jobs=3)
    assert threaded.rows == table.rows
    fit = regress_decay(table)
    assert fit.slope < 0


def test_decay_mean_is_the_mean_of_the_per_title_maxima():
    rng = np.random.default_rng(7)
    words = [f"word{i}" for i in range(12)]
    model = EmbeddingModel.from_vectors({w: rng.normal(size=5) for w in words})
    editions = [
        edition(year, [(f"JOB {i}", " ".join(rng.choice(words, size=4)), ()) for i in range(n)])
        for year, n in ((1939, 9), (1965, 6), (1991, 4))
    ]
    table = similarity_decay(editions, model)
    for row in table.rows:
        maxima = [m.similarity for m in table.maxima
                  if (m.focal_year, m.other_year) == (row.focal_year, row.other_year)]
        assert len(maxima) == row.n_focal
        assert row.mean_max_similarity == pytest.approx(float(np.mean(maxima)), abs=1e-12)
