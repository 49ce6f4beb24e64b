import json

import pytest

from occnet.corpus_parser.grammar import default_grammar
from occnet.gateway.server import create_app
from occnet.synthetic import planted_polarization_graph


@pytest.fixture
def grammar():
    return default_grammar()


@pytest.fixture
def report_dir(tmp_path):
    """A minimal run output directory with one edition's artifacts."""
    out = tmp_path / "output"
    (out / "tables").mkdir(parents=True)
    (out / "polarization").mkdir()
    (out / "graphs").mkdir()
    (out / "manifest.json").write_text(json.dumps({"tool": "occnet", "version": "0.1.0"}), encoding="utf-8")
    (out / "tables" / "edition_stats.csv").write_text(
        "year,total_entries,vocab_size\n1939,10,42\n1965,12,50\n", encoding="utf-8"
    )
    (out / "tables" / "polarization_summary.csv").write_text(
        "year,Q,Q_bar,CI_low\n1939,0.1,0.3,\n1965,0.2,0.5,0.15\n", encoding="utf-8"
    )
    (out / "tables" / "regressions.json").write_text(json.dumps({"persistence": {"slope": 1.5}}), encoding="utf-8")
    (out / "polarization" / "1939.json").write_text(json.dumps({"year": 1939, "Q": 0.1}), encoding="utf-8")
    (out / "graphs" / "1939.nodes.json").write_text(
        json.dumps({"year": 1939, "nodes": [{"id": "1939-00000", "title": "LATHE HAND", "label": "Physical"}]}),
        encoding="utf-8",
    )
    return out


@pytest.fixture
def app(report_dir):
    app = create_app(report_dir)
    app.config["TESTING"] = True
    return app


@pytest.fixture
def client(app):
    return app.test_client()


@pytest.fixture
def planted_graph():
    """200 nodes, within-class edges twice as heavy as between-class ones."""
    return planted_polarization_graph(n=200, p0=0.5, within_weight=1.0, between_weight=0.5,
                                      edge_probability=0.1, seed=7)
