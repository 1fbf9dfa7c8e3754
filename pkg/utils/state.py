"""File utilities: atomic writes, checksums and the last-run cache

Manifests of completed runs are cached under ``settings.CACHE_DIR`` so the
MCP server can answer ``get_last_run`` across sessions.
"""

import asyncio
import hashlib
import json
import logging
import os
import tempfile
from pathlib import Path

from config import settings
from models import RunManifest

logger = logging.getLogger(__name__)

HISTORY_LIMIT = 10

# Lock for serialising cache writes (history.json is read-modify-write)
_file_lock = asyncio.Lock()


def _cache_dir() -> Path:
    path = Path(settings.CACHE_DIR)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _get_history_file() -> Path:
    return _cache_dir() / "history.json"


def atomic_write(path: Path, content: str | bytes) -> None:
    """Write content to *path* atomically via temp-file + os.replace."""
    mode = "wb" if isinstance(content, bytes) else "w"
    fd, tmp_path = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
    try:
        with os.fdopen(fd, mode) as f:
            f.write(content)
        os.replace(tmp_path, path)
    except BaseException:
        try:
            os.unlink(tmp_path)
        except OSError:
            pass
        raise


def sha256_file(path: Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _read_history() -> list[dict]:
    history_file = _get_history_file()
    if not history_file.exists():
        return []
    try:
        return json.loads(history_file.read_text())
    except (json.JSONDecodeError, IOError):
        logger.warning("Ignoring unreadable run history at %s", history_file)
        return []


async def cache_run_manifest(manifest: RunManifest) -> None:
    """Append a finished run to the history, keeping the newest entries."""
    async with _file_lock:
        history = _read_history()
        history.append(manifest.model_dump())
        atomic_write(_get_history_file(), json.dumps(history[-HISTORY_LIMIT:], default=str))


async def get_last_run() -> RunManifest | None:
    history = _read_history()
    if not history:
        return None
    return RunManifest.model_validate(history[-1])


async def list_recent_runs(limit: int = HISTORY_LIMIT) -> list[RunManifest]:
    return [RunManifest.model_validate(item) for item in _read_history()[-limit:]]


async def clear_cache() -> int:
    """Remove the history file; returns the number of runs dropped."""
    async with _file_lock:
        history = _read_history()
        history_file = _get_history_file()
        if history_file.exists():
            history_file.unlink()
        return len(history)
