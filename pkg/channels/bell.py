"""Bell states and the analytic error states built from them"""

import logging

import numpy as np
from pydantic import BaseModel, Field

from config import settings
from quantum import (
    ComplexOperator,
    CompositeSpace,
    DensityMatrix,
    NonPhysicalStateError,
    PureState,
    UnknownStateError,
)

from .kraus import ChannelKind, apply_channel, make_channel

logger = logging.getLogger(__name__)

BELL_LABELS = ("psi+", "psi-", "phi+", "phi-")

_ALIASES = {
    "ψ+": "psi+",
    "ψ-": "psi-",
    "ψ−": "psi-",
    "φ+": "phi+",
    "φ-": "phi-",
    "φ−": "phi-",
}

_TERMS = {
    "psi+": {"eg": 1, "ge": 1},
    "psi-": {"eg": 1, "ge": -1},
    "phi+": {"gg": 1, "ee": 1},
    "phi-": {"gg": 1, "ee": -1},
}


class ErrorParams(BaseModel):
    """Strengths of the single-channel and combined Bell error models."""

    p: float = Field(default=0.0, ge=0.0, le=1.0, description="Single-channel strength")
    eps_d: float = Field(default=0.0, ge=0.0, lt=0.5, description="Damping error")
    eps_p: float = Field(default=0.0, ge=0.0, lt=0.5, description="Phase error")


def canonical_bell_label(label: str) -> str:
    key = label.strip().lower()
    key = _ALIASES.get(label.strip(), key)
    if key not in _TERMS:
        raise UnknownStateError(f"Unknown Bell state '{label}', expected one of {BELL_LABELS}")
    return key


def bell_state(label: str, labels: tuple[str, str] = ("A", "B")) -> PureState:
    """One of the four Bell states; psi+- = (|eg> +- |ge>)/sqrt2."""
    space = CompositeSpace.qubits(*labels)
    return PureState.from_terms(space, _TERMS[canonical_bell_label(label)])


def bell_decomposition(rho: DensityMatrix) -> dict[str, float]:
    """Diagonal weights of a two-qubit state in the Bell basis."""
    weights = {}
    for name in BELL_LABELS:
        psi = bell_state(name, rho.space.labels).amplitudes
        weights[name] = float(np.real(np.vdot(psi, rho.entries @ psi)))
    return weights


def one_sided_bell_error(
    kind: ChannelKind | str, p: float, labels: tuple[str, str] = ("A", "B")
) -> DensityMatrix:
    """|psi-><psi-| with ``make_channel(kind, p)`` acting on the second qubit."""
    rho = bell_state("psi-", labels).density()
    return apply_channel(rho, make_channel(kind, p), [labels[1]])


def combined_error_matrix(eps_d: float, eps_p: float) -> np.ndarray:
    """(1-eps_p) psi- + eps_p psi+ + eps_d (|gg><gg| - |ge><ge|), unvalidated."""
    space = CompositeSpace.qubits("A", "B")
    psi_minus = bell_state("psi-").amplitudes
    psi_plus = bell_state("psi+").amplitudes
    matrix = (1 - eps_p) * np.outer(psi_minus, psi_minus.conj())
    matrix = matrix + eps_p * np.outer(psi_plus, psi_plus.conj())
    matrix[space.basis_index("gg"), space.basis_index("gg")] += eps_d
    matrix[space.basis_index("ge"), space.basis_index("ge")] -= eps_d
    return matrix


def combined_error_min_eigenvalue(eps_d: float, eps_p: float) -> float:
    return float(np.linalg.eigvalsh(combined_error_matrix(eps_d, eps_p))[0])


def combined_error_bell(
    params: ErrorParams,
    labels: tuple[str, str] = ("A", "B"),
    allow_unphysical: bool = False,
) -> DensityMatrix | ComplexOperator:
    """Bell pair carrying both damping and phase errors.

    The model is only positive when (1/2 - eps_d)/2 >= (1/2 - eps_p)^2. With
    ``allow_unphysical`` the raw operator is returned instead of raising, for
    evaluating closed forms outside that region.
    """
    space = CompositeSpace.qubits(*labels)
    matrix = combined_error_matrix(params.eps_d, params.eps_p)
    min_eig = float(np.linalg.eigvalsh(matrix)[0])
    if min_eig < -settings.PSD_TOL:
        if allow_unphysical:
            logger.warning(
                "Combined error state eps_d=%.4f eps_p=%.4f is not positive "
                "(min eigenvalue %.4e)",
                params.eps_d,
                params.eps_p,
                min_eig,
            )
            return ComplexOperator(space=space, entries=matrix)
        raise NonPhysicalStateError(
            f"eps_d={params.eps_d}, eps_p={params.eps_p} gives a negative "
            f"eigenvalue {min_eig:.4e}"
        )
    return DensityMatrix(space=space, entries=matrix)
