"""Pydantic models for experiment runs and their artifacts"""

from datetime import datetime

from pydantic import BaseModel, Field


class OutputFile(BaseModel):
    """One file emitted by a run"""

    path: str = Field(description="Path relative to the run directory")
    sha256: str = Field(description="Hex digest of the file contents")
    bytes: int = Field(ge=0)
    columns: list[str] = Field(default_factory=list, description="CSV header, if any")


class ExperimentSummary(BaseModel):
    """Key scalars of a finished experiment"""

    experiment: str = Field(description="Registered experiment name")
    scalars: dict[str, float] = Field(default_factory=dict)
    table: list[dict[str, float]] = Field(
        default_factory=list, description="Rows for the report table"
    )
    notes: list[str] = Field(default_factory=list)

    def format_markdown(self) -> str:
        """Format the summary as markdown for display"""
        parts = [f"## {self.experiment}"]
        if self.scalars:
            parts.append("\n".join(f"- **{k}**: {v:.6g}" for k, v in self.scalars.items()))
        if self.table:
            headers = list(self.table[0])
            lines = [
                "| " + " | ".join(headers) + " |",
                "|" + "---|" * len(headers),
            ]
            for row in self.table:
                lines.append("| " + " | ".join(f"{row[h]:.6g}" for h in headers) + " |")
            parts.append("\n".join(lines))
        if self.notes:
            parts.append("\n".join(f"_{note}_" for note in self.notes))
        return "\n\n".join(parts)


class RunManifest(BaseModel):
    """Record of one run: config hash, outputs with checksums, timing"""

    experiment: str
    config_hash: str = Field(description="sha256 of the canonical config JSON")
    library_version: str
    seed: int
    outputs: list[OutputFile] = Field(default_factory=list)
    summary: ExperimentSummary | None = None
    started_at: str = Field(default_factory=lambda: datetime.now().isoformat())
    finished_at: str | None = None
    elapsed_s: float | None = None
    run_dir: str | None = Field(default=None, description="Absolute run directory")

    def output(self, path: str) -> OutputFile:
        for item in self.outputs:
            if item.path == path:
                return item
        raise KeyError(path)

    def format_markdown(self) -> str:
        """Format the manifest as markdown for display"""
        parts = [
            f"# Run: {self.experiment}",
            f"- config hash: `{self.config_hash[:16]}`\n- seed: {self.seed}\n"
            f"- version: {self.library_version}",
        ]
        if self.outputs:
            parts.append(
                "\n".join(f"- `{o.path}` ({o.bytes} B, sha256 {o.sha256[:12]})" for o in self.outputs)
            )
        if self.summary is not None:
            parts.append(self.summary.format_markdown())
        if self.elapsed_s is not None:
            parts.append(f"_Elapsed: {self.elapsed_s:.2f} s, finished {self.finished_at}_")
        return "\n\n".join(parts)
