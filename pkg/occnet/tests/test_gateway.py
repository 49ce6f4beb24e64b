import pytest

from occnet import __version__


def test_health(client):
    response = client.get("/health")
    assert response.status_code == 200
    assert response.get_json() == {"status": "ok", "version": __version__}


def test_manifest(client):
    response = client.get("/reports/manifest")
    assert response.status_code == 200
    assert response.get_json()["tool"] == "occnet"


def test_missing_manifest(client, report_dir):
    (report_dir / "manifest.json").unlink()
    response = client.get("/reports/manifest")
    assert response.status_code == 404
    assert "error" in response.get_json()


def test_list_editions(client):
    response = client.get("/reports/editions")
    assert response.status_code == 200
    data = response.get_json()
    assert [row["year"] for row in data] == [1939, 1965]
    assert data[1]["vocab_size"] == 50


def test_polarization_summary_turns_blank_cells_into_null(client):
    response = client.get("/reports/polarization")
    assert response.status_code == 200
    data = response.get_json()
    assert data[0]["CI_low"] is None
    assert data[1]["Q_bar"] == 0.5


@pytest.mark.parametrize("year, status", [("1939", 200), ("1991", 404), ("19x9", 400)])
def test_polarization_report(client, year, status):
    response = client.get(f"/reports/polarization/{year}")
    assert response.status_code == status
    if status == 200:
        assert response.get_json()["Q"] == 0.1


def test_graph_nodes(client):
    response = client.get("/reports/graphs/1939/nodes")
    assert response.status_code == 200
    assert response.get_json()["nodes"][0]["label"] == "Physical"
    assert client.get("/reports/graphs/1965/nodes").status_code == 404


@pytest.mark.parametrize(
    "name, status",
    [("edition_stats", 200), ("regressions", 200), ("sweep", 404), ("Edition-Stats", 400)],
)
def test_tables(client, name, status):
    assert client.get(f"/reports/tables/{name}").status_code == status


def test_json_table_is_returned_as_stored(client):
    response = client.get("/reports/tables/regressions")
    assert response.get_json() == {"persistence": {"slope": 1.5}}


def test_unreadable_table(client, report_dir, mocker):
    mocker.patch("occnet.reports_service.routes.pd.read_csv", side_effect=ValueError("bad csv"))
    response = client.get("/reports/tables/edition_stats")
    assert response.status_code == 500


def test_cors_headers_on_reports(client):
    response = client.get("/reports/editions", headers={"Origin": "http://localhost:3000"})
    assert response.headers.get("Access-Control-Allow-Origin") == "*"


def test_corrupt_manifest_is_a_server_error(client, report_dir):
    (report_dir / "manifest.json").write_text("{not json", encoding="utf-8")
    response = client.get("/reports/manifest")
    assert response.status_code == 500
    assert response.get_json() == {"error": "Stored artifact is unreadable"}


def test_corrupt_json_table_is_a_server_error(client, report_dir):
    (report_dir / "tables" / "regressions.json").write_text("[1, 2", encoding="utf-8")
    response = client.get("/reports/tables/regressions")
    assert response.status_code == 500
    assert "regressions" in response.get_json()["error"]
