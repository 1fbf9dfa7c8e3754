"""Qubit-cable-qubit Hamiltonians in the frame of the central cable mode

Two representations are supported. The full tensor space keeps every
subsystem with its own dimension. The single-excitation space has basis
(vacuum, site_1, ..., site_n) in layout label order, which is closed under
the Hamiltonian and under every loss channel used here.
"""

import logging

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from config import settings
from quantum import (
    SIGMA_MINUS,
    ComplexOperator,
    CompositeSpace,
    DensityMatrix,
    NonPhysicalStateError,
    embed,
    partial_trace_matrix,
)

from .params import CableParams

logger = logging.getLogger(__name__)

EXCITATION_LABEL = "excitation"
VACUUM = "vac"


class Segment(BaseModel):
    """Rectangular control segment; frequencies in rad/ns."""

    model_config = ConfigDict(frozen=True)

    duration_ns: float = Field(gt=0)
    detunings: dict[str, float] = Field(
        default_factory=dict, description="Qubit detuning from the central mode, by label"
    )
    g_a: float = Field(default=0.0, description="Node A coupler strength")
    g_b: float = Field(default=0.0, description="Node B coupler strength")
    name: str = ""


class PulseSchedule(BaseModel):
    model_config = ConfigDict(frozen=True)

    segments: tuple[Segment, ...] = Field(min_length=1)

    @property
    def total_ns(self) -> float:
        return float(sum(seg.duration_ns for seg in self.segments))

    def boundaries(self) -> list[float]:
        """Segment start times followed by the end time."""
        edges = [0.0]
        for seg in self.segments:
            edges.append(edges[-1] + seg.duration_ns)
        return edges


class CableLayout(BaseModel):
    """Which qubits hang off the cable ends.

    ``qubit_a`` couples to every mode with g_a; ``qubit_b`` (optional) couples
    with (-1)^m g_b.
    """

    model_config = ConfigDict(frozen=True)

    cable: CableParams = CableParams()
    qubit_a: str = "Q2A"
    qubit_b: str | None = "Q2B"

    @property
    def qubit_labels(self) -> list[str]:
        return [self.qubit_a] + ([self.qubit_b] if self.qubit_b else [])

    @property
    def labels(self) -> list[str]:
        tail = [self.qubit_b] if self.qubit_b else []
        return [self.qubit_a] + self.cable.mode_labels() + tail

    def full_space(self) -> CompositeSpace:
        dims = [2] + [self.cable.mode_dim] * self.cable.n_modes
        if self.qubit_b:
            dims.append(2)
        return CompositeSpace(dims=tuple(dims), labels=tuple(self.labels))

    def excitation_space(self) -> CompositeSpace:
        return CompositeSpace(dims=(len(self.labels) + 1,), labels=(EXCITATION_LABEL,))

    def site_index(self, label: str) -> int:
        """Single-excitation basis index of ``label`` (vacuum is 0)."""
        return 1 + self.labels.index(label)

    def isometry(self) -> np.ndarray:
        """Columns embed the single-excitation basis into the full space."""
        full = self.full_space()
        v = np.zeros((full.total_dim, len(self.labels) + 1))
        v[0, 0] = 1.0
        for k in range(len(self.labels)):
            levels = "".join("e" if j == k else "g" for j in range(len(self.labels)))
            v[full.basis_index(levels), k + 1] = 1.0
        return v

    def excited_state(self, label: str) -> DensityMatrix:
        """|label excited, everything else ground> in the single-excitation space."""
        rho = np.zeros((len(self.labels) + 1,) * 2)
        idx = self.site_index(label)
        rho[idx, idx] = 1.0
        return DensityMatrix(space=self.excitation_space(), entries=rho)

    def to_full(self, rho: DensityMatrix) -> np.ndarray:
        v = self.isometry()
        return v @ rho.entries @ v.T

    def reduce(self, rho: DensityMatrix, keep: list[str]) -> DensityMatrix:
        """Partial trace of a single-excitation state onto ``keep``."""
        reduced, sub = partial_trace_matrix(self.to_full(rho), self.full_space(), keep)
        return DensityMatrix.from_cleaned(sub, reduced)

    def coupling(self, label: str, segment: Segment, m: int) -> float:
        if label == self.qubit_a:
            return segment.g_a
        return (-1) ** m * segment.g_b


def _check_hermitian(matrix: np.ndarray) -> None:
    deviation = float(np.max(np.abs(matrix - matrix.conj().T)))
    if deviation > settings.HERMITIAN_TOL:
        raise NonPhysicalStateError(f"Hamiltonian not Hermitian (deviation {deviation:.3e})")


def build_hamiltonian(
    layout: CableLayout, segment: Segment, single_excitation: bool = True
) -> ComplexOperator:
    """H = sum_k D_k s_k^+ s_k + sum_m w_m b_m^+ b_m + sum_{k,m} g_km (s_k^+ b_m + h.c.)."""
    cable = layout.cable
    modes = cable.mode_labels()

    if single_excitation:
        space = layout.excitation_space()
        h = np.zeros((space.total_dim,) * 2, dtype=complex)
        for label in layout.qubit_labels:
            idx = layout.site_index(label)
            h[idx, idx] = segment.detunings.get(label, 0.0)
        for m, mode in enumerate(modes, start=1):
            c = layout.site_index(mode)
            h[c, c] = cable.mode_offset(m)
            for label in layout.qubit_labels:
                q = layout.site_index(label)
                h[q, c] = h[c, q] = layout.coupling(label, segment, m)
    else:
        space = layout.full_space()
        sigma = np.array(SIGMA_MINUS, dtype=complex)
        lower = np.diag(np.sqrt(np.arange(1, cable.mode_dim)), k=1).astype(complex)
        h = np.zeros((space.total_dim,) * 2, dtype=complex)
        for label in layout.qubit_labels:
            h += segment.detunings.get(label, 0.0) * embed(sigma.T @ sigma, [label], space).entries
        for m, mode in enumerate(modes, start=1):
            h += cable.mode_offset(m) * embed(lower.T @ lower, [mode], space).entries
            for label in layout.qubit_labels:
                g = layout.coupling(label, segment, m)
                if g == 0.0:
                    continue
                hop = embed(np.kron(sigma.T, lower), [label, mode], space).entries
                h += g * (hop + hop.conj().T)

    _check_hermitian(h)
    return ComplexOperator(space=space, entries=h)
