"""Simulated tomographic measurement and least-squares state reconstruction

Each setting rotates every qubit by one of {I, X/2, Y/2} before a
computational-basis readout. Reconstruction fits Pauli coefficients to the
joint corrected probabilities of all settings and projects the result onto
the physical states.
"""

import itertools
import logging
from typing import Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator
from scipy.linalg import eigh

from protocols import standard_gate
from quantum import (
    PAULI_I,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    CompositeSpace,
    DegenerateInputError,
    DensityMatrix,
    DimensionError,
    ParameterRangeError,
    UnknownGateError,
    nearest_physical_state,
)

from .readout import VisibilityMatrix, apply_confusion, correct_readout

logger = logging.getLogger(__name__)

TOMOGRAPHY_GATES = ("I", "X/2", "Y/2")
DEFAULT_SHOTS = 8000
DEFAULT_REPEATS = 20

_PAULIS = [np.array(p, dtype=complex) for p in (PAULI_I, PAULI_X, PAULI_Y, PAULI_Z)]


class MeasurementRecord(BaseModel):
    """Outcome statistics of one tomography setting."""

    model_config = ConfigDict(frozen=True)

    setting: tuple[str, ...] = Field(description="Pre-rotation per qubit")
    shots: int = Field(ge=1)
    counts: dict[str, int] = Field(
        default_factory=dict, description="Empty for exact-probability records"
    )
    measured_probs: dict[str, float]
    corrected_probs: dict[str, float]
    raw_corrected: dict[str, float] = Field(
        default_factory=dict, description="Corrected values before clipping"
    )

    @model_validator(mode="after")
    def _check_counts(self) -> "MeasurementRecord":
        if self.counts and sum(self.counts.values()) != self.shots:
            raise ValueError(
                f"Counts sum to {sum(self.counts.values())}, expected {self.shots} shots"
            )
        return self


def all_settings(n_qubits: int = 2) -> list[tuple[str, ...]]:
    return list(itertools.product(TOMOGRAPHY_GATES, repeat=n_qubits))


def setting_unitary(setting: Sequence[str], space: CompositeSpace) -> np.ndarray:
    if len(setting) != len(space.labels):
        raise DimensionError(f"Setting {tuple(setting)} does not cover {space.labels}")
    total = np.eye(1, dtype=complex)
    for name in setting:
        if name not in TOMOGRAPHY_GATES:
            raise UnknownGateError(
                f"Tomography rotation '{name}' not in {TOMOGRAPHY_GATES}"
            )
        total = np.kron(total, standard_gate(name).unitary.entries)
    return total


def _born_probabilities(rho: DensityMatrix, setting: Sequence[str]) -> np.ndarray:
    u = setting_unitary(setting, rho.space)
    probs = np.real(np.diag(u @ rho.entries @ u.conj().T))
    probs = np.clip(probs, 0.0, None)
    return probs / probs.sum()


def _default_vis(n: int, vis: Sequence[VisibilityMatrix] | None) -> list[VisibilityMatrix]:
    vis = list(vis) if vis is not None else [VisibilityMatrix()] * n
    if len(vis) != n:
        raise DimensionError(f"{len(vis)} visibilities for {n} qubits")
    return vis


def record_from_counts(
    setting: Sequence[str],
    counts: dict[str, int],
    vis: Sequence[VisibilityMatrix],
    bitstrings: Sequence[str],
) -> MeasurementRecord:
    shots = int(sum(counts.values()))
    measured = np.array([counts.get(b, 0) for b in bitstrings], dtype=float) / shots
    corrected = correct_readout(measured, vis)
    return MeasurementRecord(
        setting=tuple(setting),
        shots=shots,
        counts={b: int(counts.get(b, 0)) for b in bitstrings},
        measured_probs=dict(zip(bitstrings, measured.tolist())),
        corrected_probs=dict(zip(bitstrings, corrected.probs)),
        raw_corrected=dict(zip(bitstrings, corrected.raw)),
    )


def simulate_measurement(
    rho: DensityMatrix,
    setting: Sequence[str],
    shots: int = DEFAULT_SHOTS,
    vis: Sequence[VisibilityMatrix] | None = None,
    seed: int = 0,
    exact: bool = False,
) -> MeasurementRecord:
    """Rotate, read out through the confusion matrices and sample ``shots``.

    With ``exact`` the infinite-shot probabilities are recorded instead of
    counts.
    """
    if shots < 1:
        raise ParameterRangeError(f"shots must be >= 1, got {shots}")
    vis = _default_vis(len(rho.space.labels), vis)
    bitstrings = rho.space.basis_labels()
    measured = apply_confusion(_born_probabilities(rho, setting), vis)

    if exact:
        corrected = correct_readout(measured, vis)
        return MeasurementRecord(
            setting=tuple(setting),
            shots=shots,
            measured_probs=dict(zip(bitstrings, measured.tolist())),
            corrected_probs=dict(zip(bitstrings, corrected.probs)),
            raw_corrected=dict(zip(bitstrings, corrected.raw)),
        )

    rng = np.random.default_rng(seed)
    draws = rng.multinomial(shots, measured / measured.sum())
    return record_from_counts(setting, dict(zip(bitstrings, draws.tolist())), vis, bitstrings)


def measure_all_settings(
    rho: DensityMatrix,
    shots: int = DEFAULT_SHOTS,
    vis: Sequence[VisibilityMatrix] | None = None,
    seed: int = 0,
    exact: bool = False,
) -> list[MeasurementRecord]:
    """One record per setting, each with its own seed derived from ``seed``."""
    settings = all_settings(len(rho.space.labels))
    seeds = np.random.SeedSequence(seed).generate_state(len(settings))
    return [
        simulate_measurement(rho, setting, shots, vis, int(s), exact)
        for setting, s in zip(settings, seeds)
    ]


def pauli_basis(n_qubits: int) -> list[np.ndarray]:
    basis = []
    for combo in itertools.product(_PAULIS, repeat=n_qubits):
        op = np.eye(1, dtype=complex)
        for p in combo:
            op = np.kron(op, p)
        basis.append(op)
    return basis


def reconstruct_state(
    records: Sequence[MeasurementRecord], space: CompositeSpace | None = None
) -> DensityMatrix:
    """Least-squares Pauli fit to every corrected probability, then PSD projection."""
    if not records:
        raise DegenerateInputError("No tomography records")
    n = len(records[0].setting)
    space = space or CompositeSpace.qubits(*(f"q{i}" for i in range(n)))
    present = {tuple(r.setting) for r in records}
    missing = [s for s in all_settings(n) if s not in present]
    if missing:
        raise DegenerateInputError(f"Missing tomography settings: {missing}")

    d = 2**n
    paulis = pauli_basis(n)
    bitstrings = space.basis_labels()
    rows, values = [], []
    for record in records:
        u = setting_unitary(record.setting, space)
        for index, bits in enumerate(bitstrings):
            # projector onto the rotated basis state
            ket = u.conj().T[:, index]
            proj = np.outer(ket, ket.conj())
            rows.append([np.real(np.trace(proj @ p)) / d for p in paulis])
            values.append(record.corrected_probs[bits])

    design = np.array(rows)
    if np.linalg.matrix_rank(design) != d * d:
        raise DegenerateInputError("Tomography design matrix is rank deficient")
    coeffs, *_ = np.linalg.lstsq(design, np.array(values), rcond=None)
    estimate = sum(c * p for c, p in zip(coeffs, paulis)) / d
    rho = nearest_physical_state(estimate, space)
    logger.debug("Reconstructed %d-qubit state from %d records", n, len(records))
    return rho


def _psd_sqrt(matrix: np.ndarray) -> np.ndarray:
    eigvals, eigvecs = eigh(0.5 * (matrix + matrix.conj().T))
    return (eigvecs * np.sqrt(np.clip(eigvals, 0.0, None))) @ eigvecs.conj().T


def mixed_state_fidelity(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """(Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2, also valid for rank-deficient states."""
    if rho.space.total_dim != sigma.space.total_dim:
        raise DimensionError("States have different dimensions")
    root = _psd_sqrt(rho.entries)
    inner = root @ sigma.entries @ root
    eigvals = eigh(0.5 * (inner + inner.conj().T), eigvals_only=True)
    value = float(np.sum(np.sqrt(np.clip(eigvals, 0.0, None))) ** 2)
    return min(max(value, 0.0), 1.0)


class TomographyStats(BaseModel):
    fidelities: tuple[float, ...]
    mean_fidelity: float
    std_fidelity: float
    shots: int


def tomography_repeats(
    rho: DensityMatrix,
    shots: int = DEFAULT_SHOTS,
    vis: Sequence[VisibilityMatrix] | None = None,
    seed: int = 0,
    repeats: int = DEFAULT_REPEATS,
) -> TomographyStats:
    """Independent reconstructions of ``rho``; spread is the uncertainty."""
    seeds = np.random.SeedSequence(seed).generate_state(repeats)
    fidelities = []
    for s in seeds:
        records = measure_all_settings(rho, shots, vis, int(s))
        fidelities.append(mixed_state_fidelity(rho, reconstruct_state(records, rho.space)))
    values = np.array(fidelities)
    return TomographyStats(
        fidelities=tuple(fidelities),
        mean_fidelity=float(values.mean()),
        std_fidelity=float(values.std(ddof=1)) if repeats > 1 else 0.0,
        shots=shots,
    )
