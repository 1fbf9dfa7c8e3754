"""Experiment tools - run configured experiments and inspect past runs"""

import logging
from typing import Annotated

from fastmcp import Context
from fastmcp.exceptions import ToolError
from fastmcp.server.dependencies import CurrentContext
from pydantic import Field

from config import settings
from quantum import BellnetError
from runner import get_registry, loads_config, run_experiment_async
from utils import get_last_run as cached_last_run
from utils import list_recent_runs, safe_log, safe_progress

logger = logging.getLogger(__name__)


def _tool_error(action: str, e: Exception) -> ToolError:
    """Domain errors pass through; anything else is logged and optionally masked."""
    if isinstance(e, BellnetError):
        return ToolError(f"{action} failed: {e}")
    logger.exception("Unexpected error during %s", action)
    if settings.MASK_ERROR_DETAILS:
        return ToolError(f"{action} failed with an internal error")
    return ToolError(f"{action} failed: {type(e).__name__}: {e}")


def register_experiment_tools(mcp):
    """Register experiment tools to the MCP server"""

    @mcp.tool(
        annotations={
            "readOnlyHint": False,
            "openWorldHint": False,
        },
        tags=["experiment", "run"],
    )
    async def run_experiment(
        config_toml: Annotated[
            str,
            Field(description="Experiment config as a TOML document (experiment, seed, [sweep], ...)"),
        ],
        ctx: Context = CurrentContext(),
    ) -> str:
        """
        Run one experiment from a TOML config and write its data files.
        Returns the run manifest with file checksums and key results.
        """
        try:
            config = loads_config(config_toml)
            await safe_log(ctx, f"Starting {config.experiment} (seed {config.seed})")
            await safe_progress(ctx, 0)
            manifest = await run_experiment_async(config, ctx=ctx)
        except Exception as e:
            raise _tool_error("run_experiment", e) from e
        await safe_progress(ctx, 100)
        return manifest.format_markdown()

    @mcp.tool(
        annotations={"readOnlyHint": True},
        tags=["experiment", "info"],
    )
    async def list_experiments() -> str:
        """
        List runnable experiments with their sweep axes and parameters.
        """
        parts = ["# Experiments"]
        for exp in get_registry().list_experiments():
            axes = ", ".join(f"`{name}` {list(points)}" for name, points in exp.axes.items())
            params = ", ".join(f"`{k}`={v!r}" for k, v in exp.params.items()) or "none"
            parts.append(
                f"## {exp.name}\n{exp.description}\n\n- axes: {axes}\n- params: {params}\n"
                f"- columns: {', '.join(exp.columns)}"
            )
        return "\n\n".join(parts)

    @mcp.tool(
        annotations={"readOnlyHint": True},
        tags=["experiment", "history"],
    )
    async def get_last_run(
        history: Annotated[
            int,
            Field(description="Also list this many earlier runs (default: 0)", ge=0, le=10),
        ] = 0,
    ) -> str:
        """
        Get the manifest of the most recent run, from the file cache.
        """
        last = await cached_last_run()
        if last is None:
            return "No runs recorded yet."
        parts = [last.format_markdown()]
        if history:
            earlier = (await list_recent_runs(history + 1))[:-1]
            parts.append(
                "\n".join(f"- {m.experiment} (seed {m.seed}) at {m.started_at}" for m in earlier)
            )
        return "\n\n---\n\n".join(parts)
