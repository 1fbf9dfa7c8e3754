"""Configuration-driven experiment runner"""

from .config import (
    DeviceConfig,
    ExperimentConfig,
    QubitOverride,
    applied_tolerances,
    load_config,
    loads_config,
    parse_config,
)
from .io import read_table, rows_to_csv
from .manifest import load_manifest, verify_manifest
from .registry import Experiment, ExperimentRegistry, ResolvedRun, get_registry
from .report import build_report, report
from .sweep import (
    execute_points,
    run_experiment,
    run_experiment_async,
    sweep,
    sweep_async,
)

__all__ = [
    "DeviceConfig",
    "Experiment",
    "ExperimentConfig",
    "ExperimentRegistry",
    "QubitOverride",
    "ResolvedRun",
    "applied_tolerances",
    "build_report",
    "execute_points",
    "get_registry",
    "load_config",
    "load_manifest",
    "loads_config",
    "parse_config",
    "read_table",
    "report",
    "rows_to_csv",
    "run_experiment",
    "run_experiment_async",
    "sweep",
    "sweep_async",
    "verify_manifest",
]
