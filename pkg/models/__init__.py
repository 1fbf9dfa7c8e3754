"""Pydantic models for bellnet-sim runs"""

from .runs import ExperimentSummary, OutputFile, RunManifest

__all__ = [
    "ExperimentSummary",
    "OutputFile",
    "RunManifest",
]
