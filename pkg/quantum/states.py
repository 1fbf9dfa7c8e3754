"""Operators, density matrices and pure states over a CompositeSpace"""

from typing import Any

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from config import settings

from .errors import DimensionError, NonPhysicalStateError
from .space import CompositeSpace


def _frozen_array(value: Any, ndim: int) -> np.ndarray:
    array = np.array(value, dtype=complex)
    if array.ndim != ndim:
        raise DimensionError(f"Expected a {ndim}-d array, got shape {array.shape}")
    array.setflags(write=False)
    return array


class ComplexOperator(BaseModel):
    """Dense square complex matrix acting on ``space``."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    space: CompositeSpace
    entries: np.ndarray = Field(description="Row-major total x total matrix")

    @field_validator("entries", mode="before")
    @classmethod
    def _to_array(cls, value: Any) -> np.ndarray:
        return _frozen_array(value, 2)

    @model_validator(mode="after")
    def _check_shape(self):
        n = self.space.total_dim
        if self.entries.shape != (n, n):
            raise DimensionError(
                f"Matrix shape {self.entries.shape} does not match space dimension {n}"
            )
        return self

    @classmethod
    def identity(cls, space: CompositeSpace) -> "ComplexOperator":
        return cls(space=space, entries=np.eye(space.total_dim))

    def dag(self) -> "ComplexOperator":
        return ComplexOperator(space=self.space, entries=self.entries.conj().T)

    def __matmul__(self, other: "ComplexOperator") -> "ComplexOperator":
        if other.space != self.space:
            raise DimensionError("Operator spaces differ")
        return ComplexOperator(space=self.space, entries=self.entries @ other.entries)

    def hermitian_deviation(self) -> float:
        return float(np.max(np.abs(self.entries - self.entries.conj().T)))

    def is_unitary(self, tol: float | None = None) -> bool:
        tol = settings.UNITARY_TOL if tol is None else tol
        product = self.entries.conj().T @ self.entries
        return bool(np.max(np.abs(product - np.eye(len(product)))) <= tol)


class DensityMatrix(BaseModel):
    """Hermitian, unit-trace, positive-semidefinite state over ``space``."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    space: CompositeSpace
    entries: np.ndarray = Field(description="Row-major total x total matrix")

    @field_validator("entries", mode="before")
    @classmethod
    def _to_array(cls, value: Any) -> np.ndarray:
        return _frozen_array(value, 2)

    @model_validator(mode="after")
    def _check_physical(self):
        n = self.space.total_dim
        rho = self.entries
        if rho.shape != (n, n):
            raise DimensionError(
                f"Matrix shape {rho.shape} does not match space dimension {n}"
            )
        herm = float(np.max(np.abs(rho - rho.conj().T)))
        if herm > settings.HERMITIAN_TOL:
            raise NonPhysicalStateError(f"Not Hermitian (max deviation {herm:.3e})")
        trace = complex(np.trace(rho))
        if abs(trace - 1.0) > settings.TRACE_TOL:
            raise NonPhysicalStateError(f"Trace {trace.real:.12f} != 1")
        min_eig = float(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))[0])
        if min_eig < -settings.PSD_TOL:
            raise NonPhysicalStateError(f"Negative eigenvalue {min_eig:.3e}")
        return self

    @classmethod
    def from_pure(cls, state: "PureState") -> "DensityMatrix":
        psi = state.amplitudes
        return cls(space=state.space, entries=np.outer(psi, psi.conj()))

    @classmethod
    def from_cleaned(cls, space: CompositeSpace, matrix: np.ndarray) -> "DensityMatrix":
        """Build from a numerically drifted matrix: Hermitian part, unit trace."""
        matrix = 0.5 * (matrix + matrix.conj().T)
        trace = np.real(np.trace(matrix))
        if trace <= 0:
            raise NonPhysicalStateError(f"Non-positive trace {trace:.3e}")
        return cls(space=space, entries=matrix / trace)

    @classmethod
    def maximally_mixed(cls, space: CompositeSpace) -> "DensityMatrix":
        n = space.total_dim
        return cls(space=space, entries=np.eye(n) / n)

    def as_operator(self) -> ComplexOperator:
        return ComplexOperator(space=self.space, entries=self.entries)

    def populations(self) -> np.ndarray:
        return np.real(np.diag(self.entries)).copy()

    def population(self, levels: str) -> float:
        index = self.space.basis_index(levels)
        return float(np.real(self.entries[index, index]))

    def purity(self) -> float:
        return float(np.real(np.trace(self.entries @ self.entries)))

    def trace_distance(self, other: "DensityMatrix") -> float:
        if other.space != self.space:
            raise DimensionError("Density matrices live on different spaces")
        eigs = np.linalg.eigvalsh(self.entries - other.entries)
        return float(0.5 * np.sum(np.abs(eigs)))

    def to_json_dict(self) -> dict:
        """Serialize as {labels, dims, re, im} with flat row-major arrays."""
        flat = self.entries.reshape(-1)
        return {
            "labels": list(self.space.labels),
            "dims": list(self.space.dims),
            "re": flat.real.tolist(),
            "im": flat.imag.tolist(),
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "DensityMatrix":
        space = CompositeSpace(dims=tuple(data["dims"]), labels=tuple(data["labels"]))
        n = space.total_dim
        re = np.asarray(data["re"], dtype=float).reshape(n, n)
        im = np.asarray(data["im"], dtype=float).reshape(n, n)
        return cls(space=space, entries=re + 1j * im)


class PureState(BaseModel):
    """Normalized state vector over ``space``."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    space: CompositeSpace
    amplitudes: np.ndarray

    @field_validator("amplitudes", mode="before")
    @classmethod
    def _to_array(cls, value: Any) -> np.ndarray:
        return _frozen_array(value, 1)

    @model_validator(mode="after")
    def _check_norm(self):
        if self.amplitudes.shape != (self.space.total_dim,):
            raise DimensionError(
                f"Vector length {self.amplitudes.shape[0]} does not match "
                f"space dimension {self.space.total_dim}"
            )
        norm = float(np.linalg.norm(self.amplitudes))
        if abs(norm - 1.0) > settings.NORM_TOL:
            raise NonPhysicalStateError(f"State norm {norm:.15f} != 1")
        return self

    @classmethod
    def basis(cls, space: CompositeSpace, levels: str) -> "PureState":
        psi = np.zeros(space.total_dim, dtype=complex)
        psi[space.basis_index(levels)] = 1.0
        return cls(space=space, amplitudes=psi)

    @classmethod
    def from_terms(cls, space: CompositeSpace, terms: dict[str, complex]) -> "PureState":
        """Normalized superposition of basis literals, e.g. {"eg": 1, "ge": -1}."""
        psi = np.zeros(space.total_dim, dtype=complex)
        for levels, amplitude in terms.items():
            psi[space.basis_index(levels)] += amplitude
        return cls(space=space, amplitudes=psi / np.linalg.norm(psi))

    def density(self) -> DensityMatrix:
        return DensityMatrix.from_pure(self)

    def overlap(self, other: "PureState") -> complex:
        if other.space != self.space:
            raise DimensionError("States live on different spaces")
        return complex(np.vdot(self.amplitudes, other.amplitudes))
