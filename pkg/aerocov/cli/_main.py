from __future__ import annotations

import argparse
import hashlib
import json
import logging
import sys
import time
from pathlib import Path
from typing import Any, Dict, List, Optional

from pydantic import ValidationError

from ..optimize import InfeasibleError
from ..util import resolve_threads
from ._commands import COMMANDS, RunContext
from ._config import ConfigError, ExperimentConfig

logger = logging.getLogger("aerocov")

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INFEASIBLE = 3
EXIT_VALIDATION = 4
EXIT_COMPUTE = 5


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="experiment JSON file")
    common.add_argument(
        "--out", type=Path, help="CSV output; a manifest goes next to it"
    )
    common.add_argument("--seed", type=int, help="override the Monte-Carlo seed")
    common.add_argument(
        "--threads", type=int, help="worker processes (default $AEROCOV_THREADS or 1)"
    )
    common.add_argument(
        "--method", choices=("approx", "exact", "mc"), help="override the block method"
    )
    common.add_argument(
        "--tolerance", type=float, help="relative quadrature tolerance"
    )
    common.add_argument(
        "-v", "--verbose", action="count", default=0, help="-v info, -vv debug"
    )

    parser = argparse.ArgumentParser(
        prog="aerocov",
        description="Downlink coverage of multi-tier UAV networks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser(
        "local-curve", parents=[common], help="local coverage against user offset"
    )
    sub.add_parser("overall", parents=[common], help="user-averaged coverage")
    sub.add_parser(
        "validate", parents=[common], help="compare analytic results with simulation"
    )
    sub.add_parser("optimize", parents=[common], help="search the tier decay rates")
    fixtures = sub.add_parser(
        "fixtures",
        parents=[common],
        help="list or regress the published reference values",
    )
    fixtures.add_argument(
        "--schema", action="store_true", help="print the experiment JSON schema"
    )
    return parser


def _load_config(path: Optional[Path]) -> tuple:
    if path is None:
        return ExperimentConfig(), b""
    raw = path.read_bytes()
    return ExperimentConfig.model_validate_json(raw), raw


def _write_outputs(frame, provenance: Dict[str, Any], args, raw: bytes, wall: float):
    if args.out is None:
        frame.to_csv(sys.stdout, index=False)
        return
    args.out.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(args.out, index=False)
    from .. import __version__

    manifest = {
        "command": args.command,
        "version": __version__,
        "config_sha256": hashlib.sha256(raw).hexdigest(),
        "seed": args.seed,
        "threads": resolve_threads(args.threads),
        "wall_time_s": round(wall, 3),
        "rows": len(frame),
        "provenance": provenance,
    }
    manifest_path = args.out.with_name(args.out.name + ".manifest.json")
    manifest_path.write_text(json.dumps(manifest, indent=2, default=str))
    logger.info("wrote %s and %s", args.out, manifest_path)


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    level = (logging.WARNING, logging.INFO, logging.DEBUG)[min(args.verbose, 2)]
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    logging.captureWarnings(True)

    if args.command == "fixtures" and args.schema:
        schema = ExperimentConfig.model_json_schema(by_alias=True)
        print(json.dumps(schema, indent=2))
        return EXIT_OK

    try:
        config, raw = _load_config(args.config)
        base_dir = args.config.parent if args.config is not None else Path(".")
        ctx = RunContext(
            config,
            base_dir,
            seed=args.seed,
            threads=args.threads,
            method=args.method,
            tolerance=args.tolerance,
        )
        resolve_threads(args.threads)
        if config.scenario is not None:
            ctx.scenario  # a bad reference is a configuration error
    except (ValidationError, ValueError, KeyError, OSError) as e:
        logger.error("configuration error: %s", e)
        return EXIT_CONFIG
    if args.seed is None:
        args.seed = ctx.sim.seed

    start = time.perf_counter()
    try:
        frame, provenance = COMMANDS[args.command](ctx)
    except (ValidationError, ConfigError, KeyError) as e:
        logger.error("configuration error: %s", e)
        return EXIT_CONFIG
    except InfeasibleError as e:
        logger.error("infeasible: %s", e)
        return EXIT_INFEASIBLE
    except (ValueError, ArithmeticError) as e:
        logger.error("computation failed: %s", e)
        return EXIT_COMPUTE
    wall = time.perf_counter() - start

    _write_outputs(frame, provenance, args, raw, wall)
    if "pass" in frame and not frame["pass"].all():
        logger.error("%d checks failed", int((~frame["pass"]).sum()))
        return EXIT_VALIDATION
    return EXIT_OK
