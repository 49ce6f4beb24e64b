import importlib
from pathlib import Path

import pytest

from occnet.config import run_config, settings
from occnet.config.run_config import RunConfig, apply_overrides, load_run_config
from occnet.errors import ConfigError


@pytest.fixture
def run_dir(tmp_path):
    (tmp_path / "raw").mkdir()
    (tmp_path / "raw" / "1939.txt").write_text("LATHE HAND (mach. shop) Turns metal.\n", encoding="utf-8")
    (tmp_path / "raw" / "1965.txt").write_text("CLERK (clerical) Files papers.\n", encoding="utf-8")
    (tmp_path / "vectors.txt").write_text("metal 1 0\npapers 0 1\n", encoding="utf-8")
    return tmp_path


def write_toml(run_dir, body):
    path = run_dir / "run.toml"
    path.write_text(body, encoding="utf-8")
    return path


EDITIONS = """
[[editions]]
year = 1939
path = "raw/1939.txt"

[[editions]]
year = 1965
path = "raw/1965.txt"
"""


def test_toml_values_and_relative_paths(run_dir):
    path = write_toml(run_dir, 'output_dir = "out"\nembeddings = "vectors.txt"\n' + EDITIONS
                      + "\n[similarity]\nthreshold = 0.6\n\n[polarization]\nbootstrap = 20\n")
    config = load_run_config(path)
    assert config.years == [1939, 1965]
    assert config.editions[0].path == run_dir / "raw" / "1939.txt"
    assert config.embeddings == run_dir / "vectors.txt"
    assert config.output_dir == run_dir / "out"
    assert config.similarity.threshold == 0.6
    assert config.similarity.weighting == "embedding_cosine"
    assert config.polarization.bootstrap == 20


def test_flags_override_the_file(run_dir):
    path = write_toml(run_dir, EDITIONS + "\n[similarity]\nthreshold = 0.6\n")
    config = load_run_config(path, {"similarity.threshold": 0.9, "jobs": 3, "classifier.mode": None})
    assert config.similarity.threshold == 0.9
    assert config.jobs == 3
    assert config.classifier.mode == "BoW"


def test_environment_supplies_defaults(mocker):
    mocker.patch.object(settings, "BOOTSTRAP_B", 77)
    mocker.patch.object(settings, "JOBS", 5)
    config = RunConfig()
    assert config.polarization.bootstrap == 77
    assert config.jobs == 5


def test_settings_read_the_environment(monkeypatch):
    monkeypatch.setenv("OCCNET_GATEWAY_PORT", "6100")
    monkeypatch.setenv("OCCNET_OUTPUT_DIR", "runs/latest")
    try:
        reloaded = importlib.reload(settings)
        assert reloaded.GATEWAY_PORT == 6100
        assert reloaded.OUTPUT_DIR == "runs/latest"
    finally:
        monkeypatch.undo()
        importlib.reload(settings)


def test_non_integer_setting_is_a_config_error(monkeypatch):
    monkeypatch.setenv("OCCNET_JOBS", "many")
    try:
        with pytest.raises(ConfigError, match="OCCNET_JOBS"):
            importlib.reload(settings)
    finally:
        monkeypatch.undo()
        importlib.reload(settings)


def test_threshold_outside_range_is_rejected(run_dir):
    path = write_toml(run_dir, EDITIONS)
    with pytest.raises(ConfigError, match="1.5"):
        load_run_config(path, {"similarity.threshold": 1.5})


def test_missing_edition_file_is_named(run_dir):
    path = write_toml(run_dir, EDITIONS.replace("1965.txt", "1966.txt"))
    with pytest.raises(ConfigError, match="1966.txt"):
        load_run_config(path)


def test_duplicate_years_are_rejected(run_dir):
    path = write_toml(run_dir, EDITIONS.replace("1965", "1939", 1))
    with pytest.raises(ConfigError, match="duplicate"):
        load_run_config(path)


@pytest.mark.parametrize(
    "body",
    [
        "colour = 1\n",
        "[similarity]\ncutoff = 0.5\n",
        "[polarization]\nbaseline = \"lattice\"\n",
        "[polarization]\ndegree = 6\n",
        "[classifier]\nmode = \"bert\"\n",
        "[sweep]\nthresholds = [0.5, 2.0]\n",
        "jobs = 0\n",
    ],
)
def test_invalid_values_are_config_errors(run_dir, body):
    with pytest.raises(ConfigError):
        load_run_config(write_toml(run_dir, body + EDITIONS if not body.startswith("[") else EDITIONS + body))


def test_unreadable_toml(run_dir):
    with pytest.raises(ConfigError):
        load_run_config(write_toml(run_dir, "threshold = = 1\n"))
    with pytest.raises(ConfigError, match="not found"):
        load_run_config(run_dir / "absent.toml")


def test_unknown_override_is_rejected():
    with pytest.raises(ConfigError):
        apply_overrides(RunConfig(), {"similarity.cutoff": 0.5})


def test_snapshot_is_relative_and_omits_runtime_settings(run_dir):
    path = write_toml(run_dir, 'embeddings = "vectors.txt"\n' + EDITIONS)
    snapshot = load_run_config(path, {"jobs": 4, "output_dir": str(run_dir / "elsewhere")}).snapshot()
    assert "jobs" not in snapshot and "output_dir" not in snapshot
    assert snapshot["editions"][0] == {"year": 1939, "path": "raw/1939.txt"}
    assert snapshot["embeddings"] == "vectors.txt"
    assert snapshot["similarity"]["threshold"] == 0.85


def test_weighting_list_is_validated():
    assert "token_jaccard" in run_config.WEIGHTINGS
    with pytest.raises(ConfigError):
        run_config.validate_run_config(RunConfig(similarity=run_config.SimilarityConfig(weighting="bm25")))
    assert Path(RunConfig().output_dir) == Path(settings.OUTPUT_DIR)
