"""Run manifests: every emitted file with its checksum"""

import json
import logging
from importlib.metadata import PackageNotFoundError, version
from pathlib import Path

from models import OutputFile, RunManifest
from quantum import ConfigError
from utils.state import atomic_write, sha256_file

logger = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.json"
DISCREPANCY_NAME = "discrepancy_report.md"


def library_version() -> str:
    try:
        return version("bellnet-sim")
    except PackageNotFoundError:
        return "0+unknown"


def write_output(run_dir: Path, name: str, content: str, columns=()) -> OutputFile:
    """Atomically write one run file and describe it for the manifest."""
    path = run_dir / name
    path.parent.mkdir(parents=True, exist_ok=True)
    atomic_write(path, content)
    logger.info("Wrote %s", path)
    return OutputFile(
        path=name,
        sha256=sha256_file(path),
        bytes=path.stat().st_size,
        columns=list(columns),
    )


def write_manifest(run_dir: Path, manifest: RunManifest) -> Path:
    path = run_dir / MANIFEST_NAME
    atomic_write(path, manifest.model_dump_json(indent=2))
    return path


def load_manifest(path: Path | str) -> RunManifest:
    """Load ``manifest.json`` from a run directory or an explicit path."""
    path = Path(path)
    if path.is_dir():
        path = path / MANIFEST_NAME
    if not path.exists():
        raise ConfigError(f"No manifest at {path}")
    try:
        manifest = RunManifest.model_validate(json.loads(path.read_text()))
    except (json.JSONDecodeError, ValueError) as e:
        raise ConfigError(f"Unreadable manifest {path}: {e}") from e
    if manifest.run_dir is None:
        manifest = manifest.model_copy(update={"run_dir": str(path.parent.resolve())})
    return manifest


def verify_manifest(manifest: RunManifest) -> list[str]:
    """Problems found in the run directory; empty when every checksum matches."""
    run_dir = Path(manifest.run_dir or ".")
    problems = []
    for item in manifest.outputs:
        path = run_dir / item.path
        if not path.exists():
            problems.append(f"missing {item.path}")
        elif sha256_file(path) != item.sha256:
            problems.append(f"checksum mismatch for {item.path}")
    return problems
