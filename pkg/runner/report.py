"""Human-readable run reports with the closed-form discrepancy table"""

import logging
from pathlib import Path

from models import RunManifest
from protocols import discrepancy_report
from quantum import ConfigError

from .io import read_table
from .manifest import DISCREPANCY_NAME, load_manifest, verify_manifest

logger = logging.getLogger(__name__)


def build_report(manifest: RunManifest) -> str:
    if not manifest.outputs:
        raise ConfigError(f"Manifest for {manifest.experiment} lists no outputs")
    problems = verify_manifest(manifest)
    if problems:
        raise ConfigError(f"Run directory does not match its manifest: {', '.join(problems)}")

    parts = [manifest.format_markdown()]
    run_dir = Path(manifest.run_dir or ".")
    listed = {item.path for item in manifest.outputs}
    for item in manifest.outputs:
        if item.path.endswith(".csv"):
            table = read_table(run_dir / item.path)
            parts.append(f"`{item.path}`: {len(table)} rows, columns {', '.join(table.columns)}")
    if DISCREPANCY_NAME in listed:
        parts.append((run_dir / DISCREPANCY_NAME).read_text().rstrip("\n"))
    else:
        # runs written before the report was part of the outputs
        logger.warning("%s has no %s, rebuilding it", manifest.run_dir, DISCREPANCY_NAME)
        parts.append(discrepancy_report().format_markdown())
    return "\n\n".join(parts)


def report(path: Path | str) -> str:
    """Report for the run whose manifest is at (or in) ``path``."""
    manifest = load_manifest(path)
    logger.info("Reporting on %s run in %s", manifest.experiment, manifest.run_dir)
    return build_report(manifest)
