"""Experiment registry - named experiments with their sweep axes and parameters"""

import hashlib
import itertools
import json
from typing import Any, Callable

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from models import ExperimentSummary
from quantum import ConfigError

from .config import ExperimentConfig

Row = dict[str, float | str]
Point = dict[str, float]
# Called as point(point, run), summarize(rows, run) and extras(rows, run)
PointFn = Callable[..., list[Row]]
SummaryFn = Callable[..., ExperimentSummary]
ExtrasFn = Callable[..., dict[str, str]]
# Called as check(run); raises ConfigError for parameters the points cannot run
CheckFn = Callable[..., None]


class Experiment(BaseModel):
    """A registered experiment.

    ``point`` turns one sweep point into CSV rows; ``summarize`` reduces all
    rows to report scalars; ``extras`` may emit further files (name -> text).
    ``check`` rejects parameter values before any point runs.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    name: str
    description: str
    axes: dict[str, tuple[float, ...]] = Field(description="Axis name -> default points")
    params: dict[str, Any] = Field(default_factory=dict, description="Defaults")
    columns: tuple[str, ...]
    point: PointFn
    summarize: SummaryFn
    extras: ExtrasFn | None = None
    check: CheckFn | None = None


class ResolvedRun(BaseModel):
    """A config merged with its experiment's defaults."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    config: ExperimentConfig
    experiment: Experiment
    axes: dict[str, tuple[float, ...]]
    params: dict[str, Any]

    def param(self, name: str) -> Any:
        return self.params[name]

    def points(self, axis: str | None = None) -> list[Point]:
        """Cartesian product of all axes, or one axis with the others at their first value."""
        names = list(self.axes)
        if axis is None:
            grids = [self.axes[n] for n in names]
        else:
            grids = [self.axes[n] if n == axis else self.axes[n][:1] for n in names]
        return [dict(zip(names, combo)) for combo in itertools.product(*grids)]

    def point_seed(self, point: Point) -> int:
        """Seed keyed on the point values, so reordering an axis leaves rows unchanged."""
        key = json.dumps(point, sort_keys=True).encode()
        digest = int.from_bytes(hashlib.sha256(key).digest()[:8], "big")
        return int(np.random.SeedSequence([self.config.seed, digest]).generate_state(1)[0])


class ExperimentRegistry:
    """Registry of runnable experiments."""

    def __init__(self):
        self._experiments: dict[str, Experiment] = {}

    def register(self, experiment: Experiment) -> Experiment:
        if experiment.name in self._experiments:
            raise ConfigError(f"Experiment '{experiment.name}' already registered")
        self._experiments[experiment.name] = experiment
        return experiment

    def get(self, name: str) -> Experiment:
        try:
            return self._experiments[name]
        except KeyError:
            raise ConfigError(
                f"Unknown experiment '{name}', expected one of {self.names()}"
            ) from None

    def names(self) -> list[str]:
        return sorted(self._experiments)

    def list_experiments(self) -> list[Experiment]:
        return [self._experiments[n] for n in self.names()]

    def resolve(self, config: ExperimentConfig) -> ResolvedRun:
        experiment = self.get(config.experiment)
        unknown_axes = sorted(set(config.sweep) - set(experiment.axes))
        if unknown_axes:
            raise ConfigError(
                f"{experiment.name} has no sweep axes {unknown_axes}; "
                f"declared: {sorted(experiment.axes)}"
            )
        unknown_params = sorted(set(config.params) - set(experiment.params))
        if unknown_params:
            raise ConfigError(
                f"{experiment.name} has no parameters {unknown_params}; "
                f"declared: {sorted(experiment.params)}"
            )
        axes = {
            name: tuple(float(v) for v in config.sweep.get(name, default))
            for name, default in experiment.axes.items()
        }
        mistyped = sorted(
            name
            for name, value in config.params.items()
            if not _same_kind(value, experiment.params[name])
        )
        if mistyped:
            raise ConfigError(
                f"{experiment.name} parameters {mistyped} do not match the types of their defaults"
            )
        params = {**experiment.params, **config.params}
        run = ResolvedRun(config=config, experiment=experiment, axes=axes, params=params)
        if experiment.check is not None:
            try:
                experiment.check(run)
            except ConfigError as e:
                raise ConfigError(f"{experiment.name}: {e}") from e
        return run


def _same_kind(value: Any, default: Any) -> bool:
    """bool, str and number parameters only accept their own kind."""
    if isinstance(default, bool) or isinstance(value, bool):
        return isinstance(value, bool) and isinstance(default, bool)
    if isinstance(default, str):
        return isinstance(value, str)
    return isinstance(value, (int, float))


_registry: ExperimentRegistry | None = None


def get_registry() -> ExperimentRegistry:
    """Get the global ExperimentRegistry singleton, populated on first use."""
    global _registry
    if _registry is None:
        _registry = ExperimentRegistry()
        from .experiments import register_builtin_experiments

        register_builtin_experiments(_registry)
    return _registry
