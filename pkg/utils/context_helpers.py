"""MCP context helpers that never raise outside a request.

Experiment code logs through ``logging``; these mirror the coarse stages
to the connected client when a Context is available.
"""

import logging

from fastmcp import Context

logger = logging.getLogger(__name__)

_UNAVAILABLE = (ValueError, AttributeError, RuntimeError)


async def safe_log(ctx: Context | None, message: str, level: str = "info") -> None:
    """Send ``message`` to the client at ``level`` ("debug", "info", "warning", "error")."""
    if ctx is None:
        return
    try:
        await getattr(ctx, level)(message)
    except _UNAVAILABLE:
        logger.debug("No request context for client log: %s", message)


async def safe_progress(ctx: Context | None, progress: int, total: int = 100) -> None:
    if ctx is None:
        return
    try:
        await ctx.report_progress(progress=progress, total=total)
    except _UNAVAILABLE:
        pass


async def report_stage(ctx: Context | None, done: int, total: int, message: str) -> None:
    """Progress plus a log line, e.g. one per finished sweep point."""
    await safe_log(ctx, message)
    await safe_progress(ctx, done, total)
