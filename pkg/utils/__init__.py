"""Utility functions for the bellnet simulator"""

from utils.context_helpers import report_stage, safe_log, safe_progress
from utils.state import (
    atomic_write,
    cache_run_manifest,
    clear_cache,
    get_last_run,
    list_recent_runs,
    sha256_file,
)

__all__ = [
    "atomic_write",
    "cache_run_manifest",
    "clear_cache",
    "get_last_run",
    "list_recent_runs",
    "report_stage",
    "safe_log",
    "safe_progress",
    "sha256_file",
]
