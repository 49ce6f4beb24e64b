"""
Report route handlers.
Read-only access to the artifacts of one pipeline run.
"""

import json
import logging
import re
from pathlib import Path
from typing import Tuple

import pandas as pd
from flask import Blueprint, Response, current_app, jsonify

from occnet.corpus_parser.io import read_json
from occnet.errors import DataError

reports_bp = Blueprint("reports", __name__)

logger = logging.getLogger(__name__)

TABLE_NAME_RE = re.compile(r"^[a-z0-9_]+$")


def _output_dir() -> Path:
    return Path(current_app.config["OCCNET_OUTPUT_DIR"])


def _frame_records(path: Path) -> list:
    # Round-trip through JSON so NaN becomes null
    frame = pd.read_csv(path)
    return json.loads(frame.to_json(orient="records"))


@reports_bp.route("/manifest", methods=["GET"])
def get_manifest() -> Tuple[Response, int]:
    """
    Run manifest (config snapshot, input hashes, version, seeds).

    Returns:
        200: Manifest object.
        404: No manifest in the output directory.
    """
    path = _output_dir() / "manifest.json"
    if not path.exists():
        return jsonify({"error": "No manifest found; run the pipeline first"}), 404
    return jsonify(read_json(path)), 200


@reports_bp.route("/editions", methods=["GET"])
def list_editions() -> Tuple[Response, int]:
    """
    Edition statistics, one row per edition.

    Returns:
        200: List of rows.
        404: Statistics table missing.
    """
    path = _output_dir() / "tables" / "edition_stats.csv"
    if not path.exists():
        return jsonify({"error": "Edition statistics not found"}), 404
    return jsonify(_frame_records(path)), 200


@reports_bp.route("/polarization", methods=["GET"])
def polarization_summary() -> Tuple[Response, int]:
    """Q and Q_bar by year."""
    path = _output_dir() / "tables" / "polarization_summary.csv"
    if not path.exists():
        return jsonify({"error": "Polarization summary not found"}), 404
    return jsonify(_frame_records(path)), 200


@reports_bp.route("/polarization/<year>", methods=["GET"])
def polarization_report(year: str) -> Tuple[Response, int]:
    """
    Full polarization report of one edition.

    Returns:
        200: Report object.
        400: Year is not an integer.
        404: No report for that year.
    """
    if not year.isdigit():
        return jsonify({"error": f"Invalid year '{year}'"}), 400
    path = _output_dir() / "polarization" / f"{int(year)}.json"
    if not path.exists():
        return jsonify({"error": f"No polarization report for {year}"}), 404
    return jsonify(read_json(path)), 200


@reports_bp.route("/graphs/<year>/nodes", methods=["GET"])
def graph_nodes(year: str) -> Tuple[Response, int]:
    if not year.isdigit():
        return jsonify({"error": f"Invalid year '{year}'"}), 400
    path = _output_dir() / "graphs" / f"{int(year)}.nodes.json"
    if not path.exists():
        return jsonify({"error": f"No graph for {year}"}), 404
    return jsonify(read_json(path)), 200


@reports_bp.route("/tables/<name>", methods=["GET"])
def get_table(name: str) -> Tuple[Response, int]:
    """
    Any table under tables/, by file stem (e.g. `persistence`, `regressions`).

    Returns:
        200: CSV tables as a list of rows, JSON tables as stored.
        400: Name outside [a-z0-9_].
        404: No such table.
    """
    if not TABLE_NAME_RE.match(name):
        return jsonify({"error": f"Invalid table name '{name}'"}), 400
    tables = _output_dir() / "tables"
    csv_path = tables / f"{name}.csv"
    json_path = tables / f"{name}.json"
    try:
        if csv_path.exists():
            return jsonify(_frame_records(csv_path)), 200
        if json_path.exists():
            return jsonify(read_json(json_path)), 200
    except (OSError, ValueError, DataError) as e:
        logger.error(f"Failed to read table {name}: {e}")
        return jsonify({"error": f"Failed to read table {name}"}), 500
    return jsonify({"error": f"Table '{name}' not found"}), 404


@reports_bp.errorhandler(DataError)
def unreadable_artifact(e: DataError) -> Tuple[Response, int]:
    logger.error(f"Failed to read artifact: {e}")
    return jsonify({"error": "Stored artifact is unreadable"}), 500
