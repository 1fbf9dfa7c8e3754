"""Kraus-operator channels: construction, validation and application"""

import logging
from enum import Enum
from typing import Iterable

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from config import settings
from quantum import (
    PAULI_I,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    ComplexOperator,
    CompositeSpace,
    DensityMatrix,
    DimensionError,
    NonPhysicalStateError,
    ParameterRangeError,
    embed,
)

logger = logging.getLogger(__name__)


class ChannelKind(str, Enum):
    BIT_FLIP = "bit_flip"
    PHASE_FLIP = "phase_flip"
    AMPLITUDE_DAMPING = "amplitude_damping"
    PHASE_DAMPING = "phase_damping"
    DEPOLARIZING = "depolarizing"


class KrausChannel(BaseModel):
    """Finite operator-sum channel on a ``dim``-level subsystem.

    Completeness is not enforced at construction; ``channel_validate`` reports
    it and ``apply_channel`` refuses incomplete channels.
    """

    model_config = ConfigDict(frozen=True)

    dim: int = Field(ge=2, description="Subsystem dimension the channel acts on")
    operators: tuple[ComplexOperator, ...] = Field(description="Kraus operators E_i")
    name: str = Field(default="custom", description="Channel kind or label")

    @classmethod
    def from_matrices(cls, matrices: Iterable, name: str = "custom") -> "KrausChannel":
        arrays = [np.asarray(m, dtype=complex) for m in matrices]
        dim = arrays[0].shape[0]
        space = CompositeSpace(dims=(dim,), labels=("target",))
        return cls(
            dim=dim,
            operators=tuple(ComplexOperator(space=space, entries=a) for a in arrays),
            name=name,
        )

    def matrices(self) -> list[np.ndarray]:
        return [op.entries for op in self.operators]


class ChannelReport(BaseModel):
    """Outcome of a completeness check."""

    passed: bool = Field(description="Whether sum E_i^dag E_i = I within tolerance")
    max_deviation: float = Field(description="Max entry of |sum E_i^dag E_i - I|")
    n_operators: int


def make_channel(kind: ChannelKind | str, p: float) -> KrausChannel:
    """Two-operator textbook channels with strength ``p`` in [0, 1].

    Phase damping keeps coherence sqrt(1-p); depolarizing replaces the state
    with I/2 at probability p.
    """
    kind = ChannelKind(kind)
    if not 0.0 <= p <= 1.0:
        raise ParameterRangeError(f"Channel strength p={p} outside [0, 1]")

    eye = np.array(PAULI_I, dtype=complex)
    if kind is ChannelKind.BIT_FLIP:
        ops = [np.sqrt(1 - p) * eye, np.sqrt(p) * np.array(PAULI_X)]
    elif kind is ChannelKind.PHASE_FLIP:
        ops = [np.sqrt(1 - p) * eye, np.sqrt(p) * np.array(PAULI_Z)]
    elif kind is ChannelKind.AMPLITUDE_DAMPING:
        ops = [
            np.array([[1, 0], [0, np.sqrt(1 - p)]]),
            np.array([[0, np.sqrt(p)], [0, 0]]),
        ]
    elif kind is ChannelKind.PHASE_DAMPING:
        ops = [
            np.array([[1, 0], [0, np.sqrt(1 - p)]]),
            np.array([[0, 0], [0, np.sqrt(p)]]),
        ]
    else:
        ops = [np.sqrt(1 - 3 * p / 4) * eye] + [
            np.sqrt(p / 4) * np.array(pauli) for pauli in (PAULI_X, PAULI_Y, PAULI_Z)
        ]
    return KrausChannel.from_matrices(ops, name=kind.value)


def channel_validate(ch: KrausChannel) -> ChannelReport:
    total = sum(e.conj().T @ e for e in ch.matrices())
    deviation = float(np.max(np.abs(total - np.eye(ch.dim))))
    return ChannelReport(
        passed=deviation <= settings.COMPLETENESS_TOL,
        max_deviation=deviation,
        n_operators=len(ch.operators),
    )


def apply_channel_matrix(
    matrix: np.ndarray,
    space: CompositeSpace,
    ch: KrausChannel,
    targets: Iterable[str],
) -> np.ndarray:
    """sum_i E_i rho E_i^dag on an unvalidated matrix."""
    targets = tuple(targets)
    target_dim = int(np.prod([space.dim_of(label) for label in targets]))
    if target_dim != ch.dim:
        raise DimensionError(
            f"Channel of dimension {ch.dim} cannot act on {targets} (dim {target_dim})"
        )
    report = channel_validate(ch)
    if not report.passed:
        raise NonPhysicalStateError(
            f"Channel '{ch.name}' is not complete (deviation {report.max_deviation:.3e})"
        )
    out = np.zeros_like(matrix, dtype=complex)
    for kraus in ch.matrices():
        full = embed(kraus, targets, space).entries
        out += full @ matrix @ full.conj().T
    return out


def apply_channel(
    rho: DensityMatrix, ch: KrausChannel, targets: Iterable[str]
) -> DensityMatrix:
    out = apply_channel_matrix(rho.entries, rho.space, ch, targets)
    return DensityMatrix(space=rho.space, entries=0.5 * (out + out.conj().T))
