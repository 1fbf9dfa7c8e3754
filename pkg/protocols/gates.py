"""Gate library: single-qubit rotations, iSWAP, CZ and the CZ-based CNOT"""

import logging
import math
from typing import Iterable

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from config import settings
from dynamics import G12_DEFAULT
from quantum import (
    PAULI_X,
    PAULI_Y,
    ComplexOperator,
    CompositeSpace,
    LabelError,
    NonPhysicalStateError,
    UnknownGateError,
    embed,
)

logger = logging.getLogger(__name__)

SINGLE_QUBIT_NS = 30.0
ISWAP_NS = math.pi / (2 * G12_DEFAULT)
# |ee> -> |gf> -> |ee> round trip at sqrt(2) g12
CZ_NS = math.pi / (math.sqrt(2) * G12_DEFAULT)


def _rx(theta: float) -> np.ndarray:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, -1j * s], [-1j * s, c]])


def _ry(theta: float) -> np.ndarray:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


_SINGLE = {
    "I": np.eye(2, dtype=complex),
    "X": np.array(PAULI_X, dtype=complex),
    "Y": np.array(PAULI_Y, dtype=complex),
    "X/2": _rx(math.pi / 2),
    "-X/2": _rx(-math.pi / 2),
    "Y/2": _ry(math.pi / 2),
    "-Y/2": _ry(-math.pi / 2),
}

_TWO = {
    "iSWAP": np.array(
        [[1, 0, 0, 0], [0, 0, -1j, 0], [0, -1j, 0, 0], [0, 0, 0, 1]], dtype=complex
    ),
    "CZ": np.diag([1, 1, 1, -1]).astype(complex),
    "CNOT": np.array(
        [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
    ),
}

_DURATIONS = {"iSWAP": ISWAP_NS, "CZ": CZ_NS, "CNOT": CZ_NS + 2 * SINGLE_QUBIT_NS}

GATE_NAMES = tuple(_SINGLE) + tuple(_TWO)


class GateOp(BaseModel):
    """Unitary gate bound to target labels; ``duration_ns`` is metadata only."""

    model_config = ConfigDict(frozen=True)

    name: str
    unitary: ComplexOperator
    targets: tuple[str, ...]
    duration_ns: float = Field(default=0.0, ge=0)

    @model_validator(mode="after")
    def _check(self) -> "GateOp":
        if self.unitary.space.labels != self.targets:
            raise LabelError(
                f"Gate {self.name} unitary labels {self.unitary.space.labels} "
                f"differ from targets {self.targets}"
            )
        if not self.unitary.is_unitary(settings.UNITARY_TOL):
            raise NonPhysicalStateError(f"Gate {self.name} is not unitary")
        return self

    def on(self, space: CompositeSpace) -> np.ndarray:
        """Full-space matrix of this gate."""
        return embed(self.unitary, self.targets, space).entries


def standard_gate(name: str, targets: Iterable[str] | None = None) -> GateOp:
    """Named gate: I, X, Y, X/2, -X/2, Y/2, -Y/2, iSWAP, CZ or CNOT.

    Rotations are exp(-i theta sigma / 2); X and Y are the bare Pauli matrices.
    """
    if name in _SINGLE:
        matrix, default, duration = _SINGLE[name], ("q",), SINGLE_QUBIT_NS
    elif name in _TWO:
        matrix, default, duration = _TWO[name], ("q1", "q2"), _DURATIONS[name]
    else:
        raise UnknownGateError(f"Unknown gate '{name}', expected one of {GATE_NAMES}")
    targets = tuple(targets) if targets is not None else default
    if len(targets) != len(default):
        raise LabelError(f"Gate {name} acts on {len(default)} qubit(s), got {targets}")
    space = CompositeSpace.qubits(*targets)
    if name == "I":
        duration = 0.0
    return GateOp(
        name=name,
        unitary=ComplexOperator(space=space, entries=matrix),
        targets=targets,
        duration_ns=duration,
    )


def compose_cnot(control_label: str, target_label: str) -> list[GateOp]:
    """CNOT as -Y/2 on the target, CZ, then Y/2 on the target (application order).

    The product is exactly CNOT; there is no leftover global or Z phase.
    """
    if control_label == target_label:
        raise LabelError(f"CNOT control and target are both '{control_label}'")
    return [
        standard_gate("-Y/2", [target_label]),
        standard_gate("CZ", [control_label, target_label]),
        standard_gate("Y/2", [target_label]),
    ]


def circuit_unitary(gates: Iterable[GateOp], space: CompositeSpace) -> np.ndarray:
    """Product of ``gates`` in application order."""
    total = np.eye(space.total_dim, dtype=complex)
    for gate in gates:
        total = gate.on(space) @ total
    return total


def bilateral_cnot(
    controls: tuple[str, str], targets: tuple[str, str]
) -> list[GateOp]:
    """One CZ-based CNOT in each node, control pair -> target pair."""
    return compose_cnot(controls[0], targets[0]) + compose_cnot(controls[1], targets[1])


def layer(name: str, labels: Iterable[str]) -> list[GateOp]:
    return [standard_gate(name, [label]) for label in labels]
