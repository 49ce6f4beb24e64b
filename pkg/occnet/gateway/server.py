"""
Report gateway: serves the artifacts of a pipeline run read-only.
This is the entrypoint behind `occnet serve`.
"""

import logging
from pathlib import Path
from typing import Optional

from flask import Flask, jsonify
from flask_cors import CORS

from occnet import __version__
from occnet.config import settings
from occnet.logging_setup import configure_logging


def create_app(output_dir: Optional[Path] = None) -> Flask:
    """
    Application factory for creating the Flask app.

    Args:
        output_dir (Path, optional): Run output directory. Defaults to OCCNET_OUTPUT_DIR.

    Returns:
        Flask: The configured Flask application.
    """
    app = Flask(__name__)
    app.config["OCCNET_OUTPUT_DIR"] = str(output_dir or settings.OUTPUT_DIR)

    # Plotting front-ends read the reports from other origins
    CORS(app, resources={r"/reports/*": {"origins": "*", "methods": ["GET", "OPTIONS"]}})

    # --- REGISTER BLUEPRINTS ---
    from occnet.reports_service.routes import reports_bp

    app.register_blueprint(reports_bp, url_prefix="/reports")
    logging.info("Serving reports from %s", app.config["OCCNET_OUTPUT_DIR"])

    # --- BASIC HEALTH CHECKPOINTS ---
    @app.route("/health")
    def health():
        """
        Health check endpoint.
        """
        return jsonify({"status": "ok", "version": __version__}), 200

    return app


if __name__ == "__main__":
    configure_logging()
    app = create_app()
    app.run(host="127.0.0.1", port=settings.GATEWAY_PORT)
