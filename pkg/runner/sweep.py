"""Run experiments: concurrent sweep points, ordered output files, manifest

Points run in worker threads bounded by ``settings.THREADS``; rows are
gathered back in axis order whatever the completion order.
"""

import asyncio
import json
import logging
import time
from datetime import datetime
from pathlib import Path

from fastmcp import Context
from pydantic import ValidationError

from config import settings
from models import RunManifest
from protocols import discrepancy_report
from quantum import BellnetError, ConfigError, NumericError
from utils import cache_run_manifest, report_stage

from .config import ExperimentConfig, applied_tolerances
from .io import rows_to_csv
from .manifest import DISCREPANCY_NAME, library_version, write_manifest, write_output
from .registry import Point, ResolvedRun, Row, get_registry

logger = logging.getLogger(__name__)


async def execute_points(
    run: ResolvedRun,
    points: list[Point],
    threads: int | None = None,
    ctx: Context | None = None,
) -> list[list[Row]]:
    semaphore = asyncio.Semaphore(max(1, threads or settings.THREADS))
    done = 0

    async def _one(point: Point) -> list[Row]:
        nonlocal done
        async with semaphore:
            rows = await asyncio.to_thread(run.experiment.point, point, run)
        done += 1
        await report_stage(ctx, done, len(points), f"{run.experiment.name}: finished {point}")
        logger.debug("%s point %s -> %d rows", run.experiment.name, point, len(rows))
        return rows

    return await asyncio.gather(*(_one(p) for p in points))


def _output_dir(config: ExperimentConfig, out_dir: Path | str | None) -> Path:
    return Path(out_dir or config.output_dir or settings.OUTPUT_DIR)


async def _run(
    config: ExperimentConfig,
    axis: str | None,
    out_dir: Path | str | None,
    threads: int | None,
    ctx: Context | None,
) -> RunManifest:
    run = get_registry().resolve(config)
    name = run.experiment.name
    stem = name if axis is None else f"{name}_{axis}"
    run_dir = _output_dir(config, out_dir) / stem
    started = time.perf_counter()
    manifest = RunManifest(
        experiment=name,
        config_hash=config.config_hash(),
        library_version=library_version(),
        seed=config.seed,
        run_dir=str(run_dir.resolve()),
    )
    logger.info("Running %s (seed %d) into %s", stem, config.seed, run_dir)

    with applied_tolerances(config):
        try:
            per_point = await execute_points(run, run.points(axis), threads, ctx)
            rows = [row for chunk in per_point for row in chunk]
            summary = run.experiment.summarize(rows, run)
            extras = run.experiment.extras(rows, run) if run.experiment.extras else {}
            discrepancies = discrepancy_report().format_markdown()
        except BellnetError:
            raise
        except ValidationError as e:
            raise ConfigError(f"{name}: {e}") from e
        except (ValueError, RuntimeError, ArithmeticError) as e:
            raise NumericError(f"{name}: {type(e).__name__}: {e}") from e

    run_dir.mkdir(parents=True, exist_ok=True)
    config_json = json.dumps(config.model_dump(mode="json"), indent=2, sort_keys=True)
    outputs = [
        write_output(run_dir, f"{stem}.csv", rows_to_csv(rows, run.experiment.columns), run.experiment.columns),
        write_output(run_dir, "config.json", config_json + "\n"),
    ]
    outputs += [write_output(run_dir, fname, text) for fname, text in sorted(extras.items())]
    outputs.append(write_output(run_dir, DISCREPANCY_NAME, discrepancies + "\n"))

    manifest = manifest.model_copy(
        update={
            "outputs": outputs,
            "summary": summary,
            "finished_at": datetime.now().isoformat(),
            "elapsed_s": time.perf_counter() - started,
        }
    )
    write_manifest(run_dir, manifest)
    await cache_run_manifest(manifest)
    logger.info("Finished %s in %.2f s", stem, manifest.elapsed_s)
    return manifest


async def run_experiment_async(
    config: ExperimentConfig,
    out_dir: Path | str | None = None,
    threads: int | None = None,
    ctx: Context | None = None,
) -> RunManifest:
    """Every point of every axis; one CSV plus any experiment extras."""
    return await _run(config, None, out_dir, threads, ctx)


async def sweep_async(
    config: ExperimentConfig,
    axis: str,
    out_dir: Path | str | None = None,
    threads: int | None = None,
    ctx: Context | None = None,
) -> RunManifest:
    """One row group per point of ``axis``, other axes held at their first value."""
    if axis not in config.sweep:
        raise ConfigError(
            f"Axis '{axis}' is not declared in the config sweep table {sorted(config.sweep)}"
        )
    return await _run(config, axis, out_dir, threads, ctx)


def run_experiment(config: ExperimentConfig, **kwargs) -> RunManifest:
    return asyncio.run(run_experiment_async(config, **kwargs))


def sweep(config: ExperimentConfig, axis: str, **kwargs) -> RunManifest:
    return asyncio.run(sweep_async(config, axis, **kwargs))
