"""Process (chi-matrix) tomography in the Pauli basis

A process E is written E(rho) = sum_mn chi_mn P_m rho P_n^dag over the
unnormalized Pauli products P_m, so a trace-preserving process has Tr chi = 1
and a unitary U has chi = c c^dag with c_m = Tr(P_m U) / d.
"""

import itertools
import logging
from typing import Any, Callable, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from config import settings
from protocols import standard_gate
from quantum import (
    CompositeSpace,
    DensityMatrix,
    DimensionError,
    NonPhysicalStateError,
    ParameterRangeError,
    PureState,
)

from .readout import VisibilityMatrix
from .state import measure_all_settings, pauli_basis, reconstruct_state

logger = logging.getLogger(__name__)

PREP_GATES = ("I", "X", "X/2", "Y/2")
PAULI_NAMES = ("I", "X", "Y", "Z")

Process = Callable[[DensityMatrix], DensityMatrix]


class ChiMatrix(BaseModel):
    """Pauli-basis process matrix on ``n_qubits`` qubits."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    n_qubits: int = Field(ge=1)
    entries: np.ndarray

    @field_validator("entries", mode="before")
    @classmethod
    def _to_array(cls, value: Any) -> np.ndarray:
        array = np.array(value, dtype=complex)
        array.setflags(write=False)
        return array

    @model_validator(mode="after")
    def _check(self) -> "ChiMatrix":
        size = 4**self.n_qubits
        if self.entries.shape != (size, size):
            raise DimensionError(
                f"chi of {self.n_qubits} qubits needs shape {(size, size)}, "
                f"got {self.entries.shape}"
            )
        deviation = float(np.max(np.abs(self.entries - self.entries.conj().T)))
        if deviation > settings.HERMITIAN_TOL:
            raise NonPhysicalStateError(f"chi is not Hermitian (deviation {deviation:.3e})")
        trace = complex(np.trace(self.entries))
        if abs(trace - 1.0) > settings.TRACE_TOL:
            raise NonPhysicalStateError(f"chi trace {trace:.6f} is not 1")
        return self

    @property
    def labels(self) -> list[str]:
        return ["".join(p) for p in itertools.product(PAULI_NAMES, repeat=self.n_qubits)]

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.entries)

    def to_json_dict(self) -> dict:
        flat = self.entries.reshape(-1)
        return {
            "n_qubits": self.n_qubits,
            "labels": self.labels,
            "re": flat.real.tolist(),
            "im": flat.imag.tolist(),
        }


def _hermitian_unit_trace(matrix: np.ndarray) -> np.ndarray:
    matrix = 0.5 * (matrix + matrix.conj().T)
    return matrix / np.real(np.trace(matrix))


def chi_of_unitary(unitary: np.ndarray) -> ChiMatrix:
    unitary = np.asarray(unitary, dtype=complex)
    d = unitary.shape[0]
    n = int(round(np.log2(d)))
    if unitary.shape != (d, d) or 2**n != d:
        raise DimensionError(f"Expected a 2^n square unitary, got shape {unitary.shape}")
    coeffs = np.array([np.trace(p @ unitary) / d for p in pauli_basis(n)])
    return ChiMatrix(n_qubits=n, entries=_hermitian_unit_trace(np.outer(coeffs, coeffs.conj())))


def preparation_states(space: CompositeSpace) -> list[tuple[tuple[str, ...], DensityMatrix]]:
    """All inputs built from |g...g> by one gate of PREP_GATES per qubit."""
    ground = PureState.basis(space, "g" * len(space.labels))
    inputs = []
    for gates in itertools.product(PREP_GATES, repeat=len(space.labels)):
        u = np.eye(1, dtype=complex)
        for name in gates:
            u = np.kron(u, standard_gate(name).unitary.entries)
        psi = u @ ground.amplitudes
        inputs.append((gates, DensityMatrix(space=space, entries=np.outer(psi, psi.conj()))))
    return inputs


def chi_from_io(
    inputs: Sequence[DensityMatrix], outputs: Sequence[DensityMatrix]
) -> ChiMatrix:
    """Linear inversion of E(rho_j) = sum_mn chi_mn P_m rho_j P_n^dag."""
    if len(inputs) != len(outputs) or not inputs:
        raise DimensionError("Need matching, non-empty input and output lists")
    d = inputs[0].space.total_dim
    n = int(round(np.log2(d)))
    paulis = pauli_basis(n)
    pairs = list(itertools.product(range(len(paulis)), repeat=2))

    blocks = []
    for rho in inputs:
        columns = [(paulis[m] @ rho.entries @ paulis[k].conj().T).reshape(-1) for m, k in pairs]
        blocks.append(np.stack(columns, axis=1))
    design = np.vstack(blocks)
    target = np.concatenate([out.entries.reshape(-1) for out in outputs])
    solution, *_ = np.linalg.lstsq(design, target, rcond=None)

    size = len(paulis)
    return ChiMatrix(n_qubits=n, entries=_hermitian_unit_trace(solution.reshape(size, size)))


def process_tomography(
    process: Process,
    labels: Sequence[str] = ("q1", "q2"),
    shots: int | None = None,
    vis: Sequence[VisibilityMatrix] | None = None,
    seed: int = 0,
) -> ChiMatrix:
    """State tomography on every prepared input, then chi inversion.

    ``shots=None`` reconstructs each output from exact probabilities.
    """
    if shots is not None and shots < 1:
        raise ParameterRangeError(f"shots must be >= 1 or None for exact tomography, got {shots}")
    space = CompositeSpace.qubits(*labels)
    prepared = preparation_states(space)
    seeds = np.random.SeedSequence(seed).generate_state(len(prepared))

    inputs, outputs = [], []
    for (gates, rho_in), s in zip(prepared, seeds):
        rho_out = process(rho_in)
        records = measure_all_settings(
            rho_out, 1 if shots is None else shots, vis, int(s), exact=shots is None
        )
        inputs.append(rho_in)
        outputs.append(reconstruct_state(records, space))
        logger.debug("Process tomography input %s done", "".join(gates))

    chi = chi_from_io(inputs, outputs)
    logger.info(
        "Process tomography on %s: largest chi eigenvalue %.4f", labels, chi.eigenvalues()[-1]
    )
    return chi


def process_fidelity(chi_ideal: ChiMatrix, chi_exp: ChiMatrix) -> float:
    """Re Tr(chi_ideal chi_exp), clamped to [0, 1]."""
    if chi_ideal.entries.shape != chi_exp.entries.shape:
        raise DimensionError(
            f"chi shapes differ: {chi_ideal.entries.shape} vs {chi_exp.entries.shape}"
        )
    value = float(np.real(np.trace(chi_ideal.entries @ chi_exp.entries)))
    tol = settings.FIDELITY_CLAMP_TOL
    if value < -tol or value > 1 + tol:
        logger.warning("Process fidelity %.12f outside [0, 1] beyond tolerance", value)
    return min(max(value, 0.0), 1.0)
