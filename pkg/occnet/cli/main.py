"""
Command-line entry point: one subcommand per pipeline stage plus `pipeline`,
`sweep`, `serve` and `synthetic`.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence

from occnet import __version__
from occnet.cli import stages
from occnet.cli.manifest import TIMINGS_NAME, StageTimer, build_manifest, write_manifest
from occnet.config import settings
from occnet.config.run_config import BASELINES, EDGE_MODES, WEIGHTINGS, EditionSource, RunConfig, load_run_config
from occnet.errors import ConfigError, OccnetError, StageError
from occnet.logging_setup import configure_logging

logger = logging.getLogger(__name__)

STAGE_COMMANDS: Dict[str, Callable[[stages.StageContext], object]] = {
    "parse": stages.run_parse,
    "spellcheck": stages.run_spellcheck,
    "classify": stages.run_classify,
    "embed": stages.run_embed,
    "graph": stages.run_graph,
    "polarize": stages.run_polarize,
    "longitudinal": stages.run_longitudinal,
}
PIPELINE_ORDER = ("parse", "spellcheck", "classify", "embed", "graph", "polarize", "longitudinal")


# --- ARGUMENTS ---
def _edition_arg(value: str) -> EditionSource:
    year, sep, path = value.partition("=")
    if not sep or not year.strip().isdigit():
        raise argparse.ArgumentTypeError(f"expected YEAR=PATH, got '{value}'")
    return EditionSource(int(year), Path(path))


def _float_list(value: str) -> List[float]:
    try:
        return [float(v) for v in value.split(",") if v.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got '{value}'") from e


def _str_list(value: str) -> List[str]:
    return [v.strip() for v in value.split(",") if v.strip()]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="Run configuration TOML")
    common.add_argument("--output-dir", type=Path, help="Output directory (overrides the config)")
    common.add_argument("--jobs", type=int, help="Worker cap for every stage")
    common.add_argument("--log-level", help="DEBUG, INFO, WARNING or ERROR")
    common.add_argument("--edition", type=_edition_arg, action="append", metavar="YEAR=PATH",
                        help="Edition file; repeatable, replaces the configured editions")
    common.add_argument("--embeddings", type=Path, help="Word-vector file")
    common.add_argument("--threshold", type=float, help="Similarity threshold in [-1, 1]")
    common.add_argument("--weighting", choices=WEIGHTINGS)
    common.add_argument("--mode", help="Classifier features: BoW or TFIDF")
    common.add_argument("--training-csv", type=Path)
    common.add_argument("--baseline", choices=BASELINES)
    common.add_argument("--edge-mode", choices=EDGE_MODES)
    common.add_argument("--bootstrap", type=int, help="Bootstrap replicates B")
    common.add_argument("--seed", type=int, help="Bootstrap and Louvain seed")
    common.add_argument("--dedup", action="store_true", default=None,
                        help="Persistence on deduplicated titles")

    parser = argparse.ArgumentParser(prog="occnet", description="Occupation-network polarization toolkit")
    parser.add_argument("--version", action="version", version=f"occnet {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    for name in STAGE_COMMANDS:
        sub.add_parser(name, parents=[common], help=f"Run the {name} stage")
    sub.add_parser("pipeline", parents=[common], help="Run every stage and write the run manifest")

    sweep = sub.add_parser("sweep", parents=[common], help="Polarization across thresholds and weightings")
    sweep.add_argument("--thresholds", type=_float_list, help="Comma-separated thresholds")
    sweep.add_argument("--weightings", type=_str_list, help="Comma-separated weightings")

    serve = sub.add_parser("serve", parents=[common], help="Serve run artifacts over HTTP")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=settings.GATEWAY_PORT)

    synthetic = sub.add_parser("synthetic", help="Write a seeded three-edition fixture")
    synthetic.add_argument("out", type=Path, help="Fixture directory")
    synthetic.add_argument("--seed", type=int, default=0)
    synthetic.add_argument("--entries", type=int, default=60, help="Entries per edition")
    synthetic.add_argument("--bootstrap", type=int, default=50)
    synthetic.add_argument("--log-level")
    return parser


def config_overrides(args: argparse.Namespace) -> Dict[str, object]:
    """Flag values keyed as load_run_config expects them."""
    return {
        "output_dir": args.output_dir,
        "jobs": args.jobs,
        "editions": args.edition,
        "embeddings": args.embeddings,
        "similarity.threshold": args.threshold,
        "similarity.weighting": args.weighting,
        "classifier.mode": args.mode,
        "classifier.training_csv": args.training_csv,
        "polarization.baseline": args.baseline,
        "polarization.edge_mode": args.edge_mode,
        "polarization.bootstrap": args.bootstrap,
        "polarization.seed": args.seed,
        "longitudinal.dedup": args.dedup,
    }


# --- STAGE RUNNER ---
def run_stage(name: str, fn: Callable[[], object], timer: StageTimer):
    """Run one stage, tagging any failure with the stage name."""
    with timer.stage(name):
        try:
            return fn()
        except StageError:
            raise
        except OccnetError as e:
            raise StageError(name, e) from e
        except Exception as e:
            logger.exception("Unexpected failure in stage %s", name)
            raise StageError(name, e) from e


def run_pipeline(config: RunConfig) -> StageTimer:
    """
    Run every stage in order, then write manifest.json and timings.json.

    The embed stage is skipped without an embedding file; the sweep runs when
    thresholds are configured.
    """
    ctx = stages.StageContext(config)
    timer = StageTimer()
    executed = []
    for name in PIPELINE_ORDER:
        if name == "embed" and config.embeddings is None:
            logger.info("No embeddings configured; embed stage skipped")
            continue
        run_stage(name, lambda fn=STAGE_COMMANDS[name]: fn(ctx), timer)
        executed.append(name)
    if config.sweep.thresholds:
        run_stage("sweep", lambda: stages.run_sweep(ctx), timer)
        executed.append("sweep")

    manifest = build_manifest(config, executed, ctx.stopwords_hash)
    write_manifest(manifest, config.output_dir)
    timer.write(Path(config.output_dir) / TIMINGS_NAME)
    logger.info("Pipeline finished; artifacts in %s", config.output_dir)
    return timer


# --- COMMANDS ---
def _load_config(args: argparse.Namespace) -> RunConfig:
    try:
        return load_run_config(args.config, config_overrides(args))
    except ConfigError as e:
        raise StageError("config", e) from e


def _cmd_stage(args: argparse.Namespace) -> int:
    config = _load_config(args)
    ctx = stages.StageContext(config)
    run_stage(args.command, lambda: STAGE_COMMANDS[args.command](ctx), StageTimer())
    return 0


def _cmd_pipeline(args: argparse.Namespace) -> int:
    run_pipeline(_load_config(args))
    return 0


def _cmd_sweep(args: argparse.Namespace) -> int:
    config = _load_config(args)
    ctx = stages.StageContext(config)
    run_stage("sweep", lambda: stages.run_sweep(ctx, args.thresholds, args.weightings), StageTimer())
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    from occnet.gateway.server import create_app

    config = _load_config(args)
    app = create_app(config.output_dir)
    app.run(host=args.host, port=args.port)
    return 0


def _cmd_synthetic(args: argparse.Namespace) -> int:
    from occnet.synthetic import write_run_fixture

    def write():
        return write_run_fixture(args.out, seed=args.seed, n_jobs=args.entries, bootstrap=args.bootstrap)

    path = run_stage("synthetic", write, StageTimer())
    logger.info("Fixture config written to %s", path)
    return 0


HANDLERS = {name: _cmd_stage for name in STAGE_COMMANDS}
HANDLERS.update({
    "pipeline": _cmd_pipeline,
    "sweep": _cmd_sweep,
    "serve": _cmd_serve,
    "synthetic": _cmd_synthetic,
})


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Run one subcommand.

    Returns:
        int: 0 on success, 2 for configuration errors, 3 for data errors,
        4 for anything unexpected.
    """
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level)
    try:
        return HANDLERS[args.command](args)
    except StageError as e:
        print(f"[ERROR] {e.stage}: {e.cause}", file=sys.stderr)
        return e.exit_code
    except OccnetError as e:
        print(f"[ERROR] {args.command}: {e}", file=sys.stderr)
        return e.exit_code
    except Exception as e:
        logger.exception("Unexpected error")
        print(f"[ERROR] {args.command}: {e}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
