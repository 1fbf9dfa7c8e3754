"""Analysis tools - closed forms, discrepancy report and coupler strength"""

import asyncio
from typing import Annotated, Literal

from fastmcp.exceptions import ToolError
from pydantic import Field

from channels import ErrorParams
from dynamics import CouplerParams, coupler_strength, rad_per_ns_to_mhz
from protocols import analytic_combined_postselect, analytic_purified_fidelity, discrepancy_report
from quantum import BellnetError


def register_analysis_tools(mcp):
    """Register read-only analysis tools to the MCP server"""

    @mcp.tool(
        annotations={"readOnlyHint": True},
        tags=["analysis", "purification"],
    )
    async def analytic_purification(
        F: Annotated[float, Field(description="Input Bell fidelity", ge=0.0, le=1.0)],
    ) -> str:
        """
        Fidelity after one bit-purification round of two Werner-like pairs.
        """
        return f"F' = {analytic_purified_fidelity(F):.12f}"

    @mcp.tool(
        annotations={"readOnlyHint": True},
        tags=["analysis", "purification"],
    )
    async def combined_error_postselect(
        eps_d: Annotated[float, Field(description="Damping error", ge=0.0, lt=0.5)],
        eps_p: Annotated[float, Field(description="Phase error", ge=0.0, lt=0.5)],
        selection: Annotated[
            Literal["gg", "ee"], Field(description="Kept Q1 readout")
        ] = "ee",
    ) -> str:
        """
        Closed-form kept pair after purifying two combined-error pairs.
        """
        try:
            result = analytic_combined_postselect(ErrorParams(eps_d=eps_d, eps_p=eps_p), selection)
        except (BellnetError, ValueError) as e:
            raise ToolError(f"combined_error_postselect failed: {e}") from e
        return (
            f"selection {result.selection}: fidelity {result.fidelity:.12f}, "
            f"phase error {result.phase_error:.12f}, success {result.success:.12f}"
        )

    @mcp.tool(
        name="discrepancy_report",
        annotations={"readOnlyHint": True},
        tags=["analysis", "report"],
    )
    async def discrepancy_report_tool() -> str:
        """
        Quoted closed forms checked against the circuit and Kraus oracles.
        """
        report = await asyncio.to_thread(discrepancy_report)
        return report.format_markdown()

    @mcp.tool(
        annotations={"readOnlyHint": True},
        tags=["analysis", "coupler"],
    )
    async def coupler_strength_mhz(
        delta: Annotated[float, Field(description="Coupler junction phase (rad)")],
        f_q_ghz: Annotated[float, Field(description="Qubit frequency (GHz)", gt=0)] = 5.8695,
        f_n_ghz: Annotated[float, Field(description="Cable mode frequency (GHz)", gt=0)] = 5.806,
    ) -> str:
        """
        Qubit-mode coupling g/2pi in MHz at coupler phase ``delta``.
        """
        try:
            g = coupler_strength(CouplerParams(delta=delta), f_q_ghz, f_n_ghz)
        except BellnetError as e:
            raise ToolError(f"coupler_strength_mhz failed: {e}") from e
        return f"g/2pi = {rad_per_ns_to_mhz(g):.6f} MHz"
