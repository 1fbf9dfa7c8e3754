"""Tests for the MCP tools, called through an in-memory client"""

import pytest
from fastmcp import Client, FastMCP
from fastmcp.exceptions import ToolError

from protocols import analytic_purified_fidelity
from tools import register_analysis_tools, register_experiment_tools


@pytest.fixture
def mcp():
    server = FastMCP("bellnet-test")
    register_experiment_tools(server)
    register_analysis_tools(server)
    return server


@pytest.fixture(autouse=True)
def _private_cache(isolated_cache):
    yield isolated_cache


async def call(mcp, name: str, arguments: dict | None = None) -> str:
    async with Client(mcp) as client:
        result = await client.call_tool(name, arguments or {})
    return result.content[0].text


class TestAnalysisTools:
    async def test_analytic_purification(self, mcp):
        text = await call(mcp, "analytic_purification", {"F": 0.8})
        assert text == f"F' = {analytic_purified_fidelity(0.8):.12f}"

    async def test_combined_error_postselect(self, mcp):
        text = await call(mcp, "combined_error_postselect", {"eps_d": 0.05, "eps_p": 0.02})
        assert text.startswith("selection ee:")
        assert "phase error" in text

    async def test_out_of_range_argument(self, mcp):
        with pytest.raises(ToolError):
            await call(mcp, "analytic_purification", {"F": 1.5})

    async def test_discrepancy_report(self, mcp):
        text = await call(mcp, "discrepancy_report")
        assert "combined_ee_phase_error" in text

    async def test_coupler_strength(self, mcp):
        text = await call(mcp, "coupler_strength_mhz", {"delta": 3.0})
        assert text.startswith("g/2pi = ")
        assert text.endswith(" MHz")

    async def test_singular_coupler(self, mcp):
        with pytest.raises(ToolError, match="coupler_strength_mhz failed"):
            await call(mcp, "coupler_strength_mhz", {"delta": 1.5707963267948966})


class TestExperimentTools:
    async def test_list_experiments(self, mcp):
        text = await call(mcp, "list_experiments")
        for name in ("bell-vs-delay", "purify-sweep", "tomo-demo"):
            assert f"## {name}" in text

    async def test_run_then_last_run(self, mcp, out_dir):
        config = (
            'experiment = "analytic-purification"\nseed = 3\n'
            f"output_dir = {str(out_dir)!r}\n[sweep]\nF = [0.9]\n"
        )
        text = await call(mcp, "run_experiment", {"config_toml": config})
        assert "# Run: analytic-purification" in text
        assert (out_dir / "analytic-purification" / "manifest.json").exists()

        last = await call(mcp, "get_last_run")
        assert "# Run: analytic-purification" in last

    async def test_no_runs_yet(self, mcp):
        assert await call(mcp, "get_last_run") == "No runs recorded yet."

    async def test_bad_config_is_tool_error(self, mcp):
        with pytest.raises(ToolError, match="run_experiment failed"):
            await call(mcp, "run_experiment", {"config_toml": 'experiment = "nope"\nseed = 1\n'})
