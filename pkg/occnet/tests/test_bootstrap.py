import math

import numpy as np
import pytest

from occnet.errors import GraphError
from occnet.job_classifier.labels import Label
from occnet.polarization.bootstrap import (
    BootstrapResult,
    bootstrap_polarization,
    compare_bootstrap,
    replicate_multiplicity,
)
from occnet.polarization.modularity import ModularityInput
from occnet.polarization.report import write_bootstrap_csv
from occnet.synthetic import planted_polarization_graph
from occnet.text_similarity.graph import SimilarityGraph
from occnet.text_similarity.similarity import Weighting


@pytest.fixture
def planted_input(planted_graph):
    graph, labels = planted_graph
    return ModularityInput(graph, labels)


def test_replicates_keep_the_network_size():
    counts = replicate_multiplicity(500, seed=3, index=11)
    assert counts.sum() == 500
    assert counts.shape == (500,)
    np.testing.assert_array_equal(counts, replicate_multiplicity(500, seed=3, index=11))


def test_distinct_node_fraction_is_one_minus_one_over_e():
    graph, labels = planted_polarization_graph(n=2000, edge_probability=0.005, seed=1)
    result = bootstrap_polarization(ModularityInput(graph, labels), B=500, seed=0)
    assert result.mean_distinct_fraction == pytest.approx(1 - 1 / math.e, abs=0.01)


def test_seed_reproduces_the_samples(planted_input):
    a = bootstrap_polarization(planted_input, B=60, seed=42)
    b = bootstrap_polarization(planted_input, B=60, seed=42)
    assert a.samples == b.samples
    assert bootstrap_polarization(planted_input, B=60, seed=43).samples != a.samples


def test_threads_do_not_change_the_samples(planted_input):
    one = bootstrap_polarization(planted_input, B=60, seed=9, jobs=1)
    many = bootstrap_polarization(planted_input, B=60, seed=9, jobs=4)
    assert one.samples == many.samples


def test_interval_is_the_plain_percentile_interval(planted_input):
    result = bootstrap_polarization(planted_input, B=100, seed=0)
    low, high = np.percentile(result.samples, [2.5, 97.5])
    assert (result.ci_low, result.ci_high) == (pytest.approx(low, abs=1e-12), pytest.approx(high, abs=1e-12))
    assert result.ci_low <= result.mean <= result.ci_high
    assert len(result.samples) == 100
    assert result.degenerate == 0


def test_single_replicate_is_deterministic(planted_input):
    first = bootstrap_polarization(planted_input, B=1, seed=5)
    again = bootstrap_polarization(planted_input, B=1, seed=5)
    assert len(first.samples) == 1
    assert first.samples == again.samples
    assert first.mean == first.ci_low == first.ci_high == first.samples[0]


def test_two_disjoint_triangles_stay_within_bounds():
    edges = [(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5)]
    graph = SimilarityGraph(
        year=1939,
        nodes=[f"1939-{i:05d}" for i in range(6)],
        src=np.array([i for i, _ in edges], dtype=np.int64),
        dst=np.array([j for _, j in edges], dtype=np.int64),
        weight=np.ones(len(edges)),
        threshold=0.0,
        weighting=Weighting.EMBEDDING_COSINE,
    )
    labels = {node: (Label.PHYSICAL if i < 3 else Label.COGNITIVE) for i, node in enumerate(graph.nodes)}
    result = bootstrap_polarization(ModularityInput(graph, labels), B=200, seed=0)
    valid = [q for q in result.samples if not math.isnan(q)]
    assert len(valid) + result.degenerate == 200
    assert all(-0.5 <= q <= 1.0 for q in valid)
    assert result.ci_low <= result.mean <= result.ci_high


def test_bootstrap_size_must_be_positive(planted_input):
    with pytest.raises(GraphError):
        bootstrap_polarization(planted_input, B=0)


def test_comparison_of_separated_editions():
    low = BootstrapResult([0.1], 1, 0, 0.1, 0.08, 0.12)
    high = BootstrapResult([0.3], 1, 0, 0.3, 0.28, 0.33)
    wide = BootstrapResult([0.2], 1, 0, 0.2, 0.1, 0.3)
    comparison = compare_bootstrap(low, high, 1939, 1991)
    assert not comparison.overlap
    assert comparison.non_canonical
    assert (comparison.year_a, comparison.mean_b) == (1939, 0.3)
    assert compare_bootstrap(low, wide).overlap


def test_bootstrap_csv_keeps_replicate_order(planted_input, tmp_path):
    result = bootstrap_polarization(planted_input, B=5, seed=2)
    path = tmp_path / "1939.bootstrap.csv"
    write_bootstrap_csv(result, path)
    lines = path.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "Q"
    assert [float(x) for x in lines[1:]] == pytest.approx(result.samples, abs=1e-12)
