import json

import pandas as pd
import pytest

from occnet.cli import main as cli
from occnet.cli.manifest import hash_output_dir
from occnet.synthetic import FIXTURE_YEARS, write_run_fixture

EXPECTED_TABLES = [
    "edition_stats.csv",
    "spelling.csv",
    "class_balance.csv",
    "embedding_coverage.csv",
    "polarization_summary.csv",
    "persistence.csv",
    "similarity_decay.csv",
    "regressions.json",
    "sweep.csv",
]


@pytest.fixture
def fixture_config(tmp_path):
    return write_run_fixture(tmp_path / "run", seed=0, n_jobs=60, bootstrap=30)


@pytest.fixture(scope="module")
def finished_run(tmp_path_factory):
    config = write_run_fixture(tmp_path_factory.mktemp("pipeline"), seed=0, n_jobs=60, bootstrap=30)
    assert cli.main(["pipeline", "--config", str(config)]) == 0
    return config, config.parent / "output"


# --- PIPELINE ---
def test_pipeline_writes_every_artifact(finished_run):
    _, out = finished_run
    for name in EXPECTED_TABLES:
        assert (out / "tables" / name).exists(), name
    for year in FIXTURE_YEARS:
        for path in (f"corpus/{year}.jsonl", f"labels/{year}.csv", f"graphs/{year}.edges.tsv",
                     f"polarization/{year}.json", f"polarization/{year}.bootstrap.csv"):
            assert (out / path).exists(), path
    assert (out / "classifier" / "model.json").exists()
    assert (out / "timings.json").exists()

    manifest = json.loads((out / "manifest.json").read_text(encoding="utf-8"))
    assert manifest["stages"][-1] == "sweep"
    assert "output_dir" not in manifest["config"]


def test_adjusted_polarization_rises_across_the_fixture_editions(finished_run):
    _, out = finished_run
    summary = pd.read_csv(out / "tables" / "polarization_summary.csv")
    assert summary["year"].tolist() == list(FIXTURE_YEARS)
    q_bar = summary["Q_bar"].tolist()
    assert q_bar[0] < q_bar[1] < q_bar[2]
    assert (summary["CI_low"] <= summary["CI_high"]).all()


def test_single_threshold_sweep_matches_the_pipeline(finished_run):
    config, out = finished_run
    assert cli.main(["sweep", "--config", str(config), "--thresholds", "0.0"]) == 0
    sweep = pd.read_csv(out / "tables" / "sweep.csv")
    summary = pd.read_csv(out / "tables" / "polarization_summary.csv")
    assert sweep["threshold"].tolist() == [0.0] * len(FIXTURE_YEARS)
    assert sweep["Q"].tolist() == pytest.approx(summary["Q"].tolist(), abs=1e-12)


def test_edition_stats_match_the_fixture_counts(finished_run):
    _, out = finished_run
    stats = pd.read_csv(out / "tables" / "edition_stats.csv")
    assert stats["year"].tolist() == list(FIXTURE_YEARS)
    # 60 jobs, one reference entry, one duplicate; the front-matter line is not an entry
    row = stats.iloc[0]
    assert row["total_entries"] == 62
    assert row["entries_with_references"] == 1
    assert row["entries_with_code"] == 61
    assert row["coded_jobs"] == 61
    assert row["unparsed_entries"] == 0
    assert row["deduplicated_entries"] == 60


def test_stricter_thresholds_never_add_edges(finished_run):
    config, out = finished_run
    assert cli.main(["sweep", "--config", str(config), "--thresholds", "0.8,0.85,0.9"]) == 0
    sweep = pd.read_csv(out / "tables" / "sweep.csv")
    assert sorted(sweep["threshold"].unique().tolist()) == [0.8, 0.85, 0.9]
    for _, group in sweep.groupby(["weighting", "year"]):
        edges = group.sort_values("threshold")["n_edges"].tolist()
        assert len(edges) == 3
        assert edges == sorted(edges, reverse=True)


def test_rerun_reproduces_the_output(fixture_config):
    out = fixture_config.parent / "output"
    assert cli.main(["pipeline", "--config", str(fixture_config)]) == 0
    first = hash_output_dir(out)
    assert cli.main(["pipeline", "--config", str(fixture_config)]) == 0
    assert hash_output_dir(out) == first


def test_worker_count_does_not_change_the_output(fixture_config):
    out = fixture_config.parent / "output"
    assert cli.main(["pipeline", "--config", str(fixture_config), "--jobs", "1"]) == 0
    serial = hash_output_dir(out)
    assert cli.main(["pipeline", "--config", str(fixture_config), "--jobs", "8"]) == 0
    assert hash_output_dir(out) == serial


# --- FAILURES ---
def test_empty_sweep_is_a_config_error(fixture_config, capsys):
    assert cli.main(["pipeline", "--config", str(fixture_config), "--bootstrap", "5"]) == 0
    assert cli.main(["sweep", "--config", str(fixture_config), "--thresholds", ""]) == 2
    assert "[ERROR] sweep" in capsys.readouterr().err


def test_missing_edition_names_the_path(fixture_config, capsys):
    missing = fixture_config.parent / "raw" / "1977.txt"
    code = cli.main(["parse", "--config", str(fixture_config), "--edition", f"1977={missing}"])
    assert code == 2
    assert str(missing) in capsys.readouterr().err


def test_threshold_outside_range_exits_with_config_error(fixture_config, capsys):
    assert cli.main(["graph", "--config", str(fixture_config), "--threshold", "1.5"]) == 2
    assert "1.5" in capsys.readouterr().err


def test_stage_needing_earlier_output_is_a_data_error(fixture_config, capsys):
    assert cli.main(["polarize", "--config", str(fixture_config)]) == 3
    assert "[ERROR] polarize" in capsys.readouterr().err


def test_unexpected_failure_exits_with_four(fixture_config, mocker, capsys):
    def broken(ctx):
        raise RuntimeError("disk on fire")

    mocker.patch.dict(cli.STAGE_COMMANDS, {"spellcheck": broken})
    assert cli.main(["pipeline", "--config", str(fixture_config)]) == 4
    assert "[ERROR] spellcheck: disk on fire" in capsys.readouterr().err


def test_synthetic_command_writes_a_runnable_fixture(tmp_path):
    assert cli.main(["synthetic", str(tmp_path / "fx"), "--entries", "20"]) == 0
    assert (tmp_path / "fx" / "run.toml").exists()
    assert (tmp_path / "fx" / "raw" / "1939.txt").exists()
