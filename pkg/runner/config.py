"""Experiment configuration files

A config is one TOML document::

    experiment = "bell-vs-delay"
    seed = 7
    shots = 8000

    [sweep]
    t_d_ns = [10, 20, 50, 100, 200, 400]

    [params]
    single_excitation = true

    [device.qubits.Q2A]
    T1_us = 5.7

    [tolerances]
    PSD_TOL = 1e-9

Frequencies are in MHz, times in ns and lifetimes in µs. Unknown keys
anywhere are rejected.
"""

import hashlib
import json
import logging
import tomllib
from contextlib import contextmanager
from pathlib import Path
from typing import Any, Iterator, Literal

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from config import settings
from dynamics import (
    DEVICE_QUBITS,
    BellLinkParams,
    CableParams,
    QubitParams,
    mhz_to_rad_per_ns,
)
from quantum import ConfigError

logger = logging.getLogger(__name__)


class QubitOverride(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    T1_us: float | None = Field(default=None, gt=0)
    T_phi_us: float | None = Field(default=None, gt=0)
    F_g: float | None = Field(default=None, ge=0, le=1)
    F_e: float | None = Field(default=None, ge=0, le=1)


class DeviceConfig(BaseModel):
    """Device parameters; unset values fall back to the measured device table."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    qubits: dict[str, QubitOverride] = Field(default_factory=dict)
    g_mhz: float = Field(default=4.3, gt=0, description="Qubit-cable coupling g/2pi")
    fsr_mhz: float = Field(default=105.0, gt=0)
    n_modes: int = Field(default=3, ge=1)
    T1r_ns: float = Field(default=477.3, gt=0)
    half_swap_ns: float = Field(default=30.0, gt=0)
    full_swap_ns: float = Field(default=60.0, gt=0)
    coupler_on_T1_us: float | None = Field(default=2.1, gt=0)
    coupler_on_T_phi_us: float | None = Field(default=None, gt=0)
    bell_dephasing: Literal["markovian", "quasi-static"] = Field(
        default="quasi-static", description="How the table T_phi acts during Bell generation"
    )

    @field_validator("qubits")
    @classmethod
    def _known_qubits(cls, value: dict[str, QubitOverride]) -> dict[str, QubitOverride]:
        unknown = sorted(set(value) - set(DEVICE_QUBITS))
        if unknown:
            raise ValueError(f"Unknown qubits {unknown}, expected {sorted(DEVICE_QUBITS)}")
        return value

    def qubit(self, name: str) -> QubitParams:
        base = DEVICE_QUBITS[name]
        override = self.qubits.get(name)
        if override is None:
            return base
        update = {
            "T1": override.T1_us,
            "T_phi": override.T_phi_us,
            "F_g": override.F_g,
            "F_e": override.F_e,
        }
        return base.model_copy(update={k: v for k, v in update.items() if v is not None})

    def lifetimes(self, name: str) -> tuple[float, float]:
        return self.qubit(name).lifetimes

    def cable(self) -> CableParams:
        return CableParams(
            n_modes=self.n_modes,
            omega_fsr=mhz_to_rad_per_ns(self.fsr_mhz),
            T1r=self.T1r_ns,
        )

    def bell_link(self) -> BellLinkParams:
        g = mhz_to_rad_per_ns(self.g_mhz)
        return BellLinkParams(
            qubit_a=self.qubit("Q2A"),
            qubit_b=self.qubit("Q2B"),
            cable=self.cable(),
            g_a=g,
            g_b=g,
            half_swap_ns=self.half_swap_ns,
            full_swap_ns=self.full_swap_ns,
            coupler_on_T1=self.coupler_on_T1_us,
            coupler_on_T_phi=self.coupler_on_T_phi_us,
            dephasing=self.bell_dephasing,
        )


class ExperimentConfig(BaseModel):
    """One experiment run. The experiment name and axes are checked by the registry."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    experiment: str
    seed: int = Field(ge=0, description="Required; no wall-clock seeding")
    shots: int = Field(default=8000, ge=1)
    repeats: int = Field(default=20, ge=1)
    output_dir: str | None = None
    sweep: dict[str, list[float]] = Field(default_factory=dict)
    params: dict[str, float | int | bool | str] = Field(default_factory=dict)
    device: DeviceConfig = Field(default_factory=DeviceConfig)
    tolerances: dict[str, float] = Field(default_factory=dict)

    @field_validator("sweep")
    @classmethod
    def _non_empty_axes(cls, value: dict[str, list[float]]) -> dict[str, list[float]]:
        empty = [axis for axis, points in value.items() if not points]
        if empty:
            raise ValueError(f"Empty sweep axes: {empty}")
        return value

    @field_validator("tolerances")
    @classmethod
    def _known_tolerances(cls, value: dict[str, float]) -> dict[str, float]:
        unknown = [key for key in value if not key.isupper() or not hasattr(settings, key)]
        if unknown:
            raise ValueError(f"Unknown tolerance settings: {unknown}")
        return value

    def config_hash(self) -> str:
        canonical = json.dumps(self.model_dump(mode="json"), sort_keys=True)
        return hashlib.sha256(canonical.encode()).hexdigest()

    def with_overrides(self, **update: Any) -> "ExperimentConfig":
        """Copy with top-level fields replaced and re-validated (CLI flags)."""
        data = self.model_dump()
        data.update({k: v for k, v in update.items() if v is not None})
        return parse_config(data)


def parse_config(data: dict[str, Any]) -> ExperimentConfig:
    try:
        return ExperimentConfig.model_validate(data)
    except ValidationError as e:
        raise ConfigError(f"Invalid experiment config: {e}") from e


def loads_config(text: str) -> ExperimentConfig:
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as e:
        raise ConfigError(f"Config is not valid TOML: {e}") from e
    return parse_config(data)


def load_config(path: Path | str) -> ExperimentConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise ConfigError(f"Cannot read config {path}: {e}") from e
    config = loads_config(text)
    logger.info("Loaded %s config from %s", config.experiment, path)
    return config


@contextmanager
def applied_tolerances(config: ExperimentConfig) -> Iterator[None]:
    """Run with the config's ``[tolerances]`` in effect, restored afterwards."""
    with settings.override(**config.tolerances):
        yield
