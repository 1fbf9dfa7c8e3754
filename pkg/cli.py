#!/usr/bin/env python3
"""
bellnet - run simulator experiments from TOML configs

    bellnet run --config purify.toml --out runs --seed 3
    bellnet sweep --config bell.toml --axis t_d_ns --threads 8
    bellnet report runs/purify-sweep
    bellnet validate-config --config purify.toml

Exit codes: 0 success, 2 config error, 3 numeric failure.
"""

import argparse
import logging
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from config import settings

# stdout carries results only
logging.basicConfig(
    level=getattr(logging, settings.LOG_LEVEL.upper(), logging.INFO),
    format="%(asctime)s [%(levelname)s] %(name)s: %(message)s",
    stream=sys.stderr,
)
logger = logging.getLogger("bellnet")

from quantum import ConfigError, NumericError
from runner import get_registry, load_config, report, run_experiment, sweep

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_CONFIG = 2
EXIT_NUMERIC = 3


def _config_from(args: argparse.Namespace):
    config = load_config(args.config)
    if args.seed is not None:
        config = config.with_overrides(seed=args.seed)
    return config


def _cmd_run(args: argparse.Namespace) -> str:
    manifest = run_experiment(_config_from(args), out_dir=args.out, threads=args.threads)
    return manifest.format_markdown()


def _cmd_sweep(args: argparse.Namespace) -> str:
    manifest = sweep(_config_from(args), args.axis, out_dir=args.out, threads=args.threads)
    return manifest.format_markdown()


def _cmd_report(args: argparse.Namespace) -> str:
    return report(args.manifest)


def _cmd_validate(args: argparse.Namespace) -> str:
    config = _config_from(args)
    run = get_registry().resolve(config)
    axes = ", ".join(f"{name} ({len(points)} points)" for name, points in run.axes.items())
    return f"{config.experiment}: OK, seed {config.seed}, axes {axes}"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bellnet", description=__doc__.splitlines()[1])
    commands = parser.add_subparsers(dest="command", required=True)

    def with_config(sub: argparse.ArgumentParser) -> argparse.ArgumentParser:
        sub.add_argument("--config", required=True, type=Path, help="Experiment TOML file")
        sub.add_argument("--seed", type=int, help="Override the config seed")
        return sub

    def with_run_flags(sub: argparse.ArgumentParser) -> argparse.ArgumentParser:
        sub.add_argument("--out", type=Path, help="Output directory (default: config, then BELLNET_OUTPUT_DIR)")
        sub.add_argument("--threads", type=int, help="Concurrent sweep points (default: BELLNET_THREADS)")
        return sub

    run = with_run_flags(with_config(commands.add_parser("run", help="Run every point of an experiment")))
    run.set_defaults(handler=_cmd_run)

    sw = with_run_flags(with_config(commands.add_parser("sweep", help="Sweep one declared axis")))
    sw.add_argument("--axis", required=True, help="Axis name from the config [sweep] table")
    sw.set_defaults(handler=_cmd_sweep)

    rep = commands.add_parser("report", help="Summarize a finished run")
    rep.add_argument("manifest", type=Path, help="Run directory or manifest.json")
    rep.set_defaults(handler=_cmd_report)

    val = with_config(commands.add_parser("validate-config", help="Check a config without running it"))
    val.set_defaults(handler=_cmd_validate)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        output = args.handler(args)
    except ConfigError as e:
        logger.error("Config error: %s", e)
        return EXIT_CONFIG
    except NumericError as e:
        logger.error("Numeric failure: %s", e)
        return EXIT_NUMERIC
    except Exception:
        logger.exception("Unexpected failure in '%s'", args.command)
        return EXIT_INTERNAL
    print(output)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
