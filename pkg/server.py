#!/usr/bin/env python3
"""
Bellnet MCP Server

A Model Context Protocol server exposing the two-node quantum network
simulator: configured experiment runs plus closed-form analysis helpers.

Tools:
    - run_experiment: Run an experiment from a TOML config
    - list_experiments: Registered experiments, axes and parameters
    - get_last_run: Manifest of the most recent run
    - analytic_purification: Werner-input bit purification
    - combined_error_postselect: Closed-form combined-error purification
    - discrepancy_report: Quoted closed forms against the oracles
    - coupler_strength_mhz: Qubit-mode coupling at a coupler phase
"""

import logging
import sys
from pathlib import Path

# Add project root to path for imports
sys.path.insert(0, str(Path(__file__).parent))

from config import settings

# MCP stdio transport uses stdout, so logs must go to stderr.
logging.basicConfig(
    level=getattr(logging, settings.LOG_LEVEL.upper(), logging.INFO),
    format="%(asctime)s [%(levelname)s] %(name)s: %(message)s",
    stream=sys.stderr,
)
logger = logging.getLogger(__name__)

from fastmcp import FastMCP
from tools import register_analysis_tools, register_experiment_tools

mcp = FastMCP("bellnet")
logger.info("Bellnet MCP server initialised (log_level=%s)", settings.LOG_LEVEL)

register_experiment_tools(mcp)
register_analysis_tools(mcp)


if __name__ == "__main__":
    mcp.run(transport="stdio")
