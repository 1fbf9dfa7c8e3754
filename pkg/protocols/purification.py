"""Purification circuits with post-selection on the measured pair

Pairs live on fixed labels: the control pair (kept) on Q2A/Q2B, the measured
pair on Q1A/Q1B and the double-selection check pair on Q3A/Q3B. Circuits run
on raw matrices so closed forms can be evaluated outside the physical region.
"""

import itertools
import logging
from enum import Enum
from functools import lru_cache

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from channels import bell_state
from config import settings
from quantum import (
    ComplexOperator,
    CompositeSpace,
    DensityMatrix,
    DimensionError,
    ParameterRangeError,
    PureState,
    UndefinedPostStateError,
    embed,
    partial_trace_matrix,
    state_fidelity,
)

from .gates import GateOp, bilateral_cnot, circuit_unitary, layer

logger = logging.getLogger(__name__)

CONTROL = ("Q2A", "Q2B")
MEASURED = ("Q1A", "Q1B")
CHECK = ("Q3A", "Q3B")
OUTCOMES = ("gg", "ge", "eg", "ee")


class Scheme(str, Enum):
    BIT = "bit"
    PHASE = "phase"
    DOUBLE = "double"


class Selection(str, Enum):
    GG = "gg"
    EE = "ee"
    BOTH = "both-consistent"


_KEPT = {
    Selection.GG: ("gg",),
    Selection.EE: ("ee",),
    Selection.BOTH: ("gg", "ee"),
}


def kept_outcomes(selection: Selection | str) -> tuple[str, ...]:
    """Q1 readouts kept by a single-round selection."""
    return _KEPT[Selection(selection)]


# Joint outcomes of (Q1, Q3) kept by double selection
DOUBLE_KEPT = tuple((q1, q3) for q1 in ("ge", "eg") for q3 in ("gg", "ee"))


class PurificationOutcome(BaseModel):
    """Post-selected control pair and the statistics of the selection."""

    model_config = ConfigDict(frozen=True)

    post_state: DensityMatrix = Field(description="Kept pair on Q2A/Q2B")
    success_prob: float = Field(ge=0.0, le=1.0)
    fidelity: float = Field(ge=0.0, le=1.0, description="Against purification_target")
    selection: str
    scheme: Scheme = Scheme.BIT
    outcome_probs: dict[str, float] = Field(
        default_factory=dict, description="Weight of every measured outcome"
    )


def _pair_matrix(rho: DensityMatrix | ComplexOperator | np.ndarray) -> np.ndarray:
    matrix = rho if isinstance(rho, np.ndarray) else rho.entries
    if isinstance(rho, (DensityMatrix, ComplexOperator)) and rho.space.dims != (2, 2):
        raise DimensionError(f"Expected a two-qubit state, got dims {rho.space.dims}")
    if matrix.shape != (4, 4):
        raise DimensionError(f"Expected a 4x4 pair matrix, got shape {matrix.shape}")
    return np.asarray(matrix, dtype=complex)


@lru_cache(maxsize=None)
def _circuit(scheme: Scheme) -> tuple[CompositeSpace, np.ndarray]:
    if scheme is Scheme.DOUBLE:
        space = CompositeSpace.qubits(*CONTROL, *MEASURED, *CHECK)
        gates: list[GateOp] = (
            bilateral_cnot(CONTROL, MEASURED)
            + bilateral_cnot(CHECK, MEASURED)
            + layer("-Y/2", CHECK)
        )
    else:
        space = CompositeSpace.qubits(*CONTROL, *MEASURED)
        gates = bilateral_cnot(CONTROL, MEASURED)
        if scheme is Scheme.PHASE:
            gates = layer("Y/2", CONTROL + MEASURED) + gates + layer("-Y/2", CONTROL)
    logger.debug("Built %s purification circuit from %d gates", scheme.value, len(gates))
    return space, circuit_unitary(gates, space)


def _projector(space: CompositeSpace, labels: tuple[str, ...], levels: str) -> np.ndarray:
    local = np.zeros((2 ** len(labels),) * 2, dtype=complex)
    index = CompositeSpace.qubits(*labels).basis_index(levels)
    local[index, index] = 1.0
    return embed(local, labels, space).entries


def purification_branches(
    rho1, rho2, scheme: Scheme | str = Scheme.BIT
) -> dict[str, tuple[np.ndarray, float]]:
    """Unnormalized kept-pair matrix and weight for each measured outcome.

    ``rho1`` is the measured pair, ``rho2`` the control pair. Inputs may be
    raw 4x4 matrices.
    """
    scheme = Scheme(scheme)
    if scheme is Scheme.DOUBLE:
        raise ParameterRangeError("Use double_selection_branches for three pairs")
    space, unitary = _circuit(scheme)
    joint = np.kron(_pair_matrix(rho2), _pair_matrix(rho1))
    joint = unitary @ joint @ unitary.conj().T

    branches = {}
    for outcome in OUTCOMES:
        proj = _projector(space, MEASURED, outcome)
        reduced, _ = partial_trace_matrix(proj @ joint @ proj, space, CONTROL)
        branches[outcome] = (reduced, float(np.real(np.trace(reduced))))
    return branches


def double_selection_branches(
    rho1, rho2, rho3
) -> dict[tuple[str, str], tuple[np.ndarray, float]]:
    """Branches keyed by (Q1 outcome, Q3 outcome); ``rho3`` is the check pair."""
    space, unitary = _circuit(Scheme.DOUBLE)
    joint = np.kron(np.kron(_pair_matrix(rho2), _pair_matrix(rho1)), _pair_matrix(rho3))
    joint = unitary @ joint @ unitary.conj().T

    branches = {}
    for q1, q3 in itertools.product(OUTCOMES, repeat=2):
        proj = _projector(space, MEASURED + CHECK, q1 + q3)
        reduced, _ = partial_trace_matrix(proj @ joint @ proj, space, CONTROL)
        branches[(q1, q3)] = (reduced, float(np.real(np.trace(reduced))))
    return branches


@lru_cache(maxsize=None)
def _target(scheme: Scheme) -> PureState:
    psi_plus = bell_state("psi+", CONTROL)
    if scheme is not Scheme.PHASE:
        return psi_plus
    space = psi_plus.space
    back = circuit_unitary(layer("-Y/2", CONTROL), space)
    return PureState(space=space, amplitudes=back @ psi_plus.amplitudes)


def purification_target(scheme: Scheme | str) -> PureState:
    """State the kept pair approaches for ideal psi- inputs."""
    return _target(Scheme(scheme))


def _kept(
    branches: dict, keys, scheme: Scheme, selection: str, outcome_probs: dict[str, float]
) -> PurificationOutcome:
    kept = sum(branches[key][0] for key in keys)
    success = sum(branches[key][1] for key in keys)
    if success <= settings.PSD_TOL:
        raise UndefinedPostStateError(
            f"Selection '{selection}' has probability {success:.3e}; no post-state"
        )
    post = DensityMatrix.from_cleaned(CompositeSpace.qubits(*CONTROL), kept)
    return PurificationOutcome(
        post_state=post,
        success_prob=min(max(success, 0.0), 1.0),
        fidelity=state_fidelity(post, purification_target(scheme)),
        selection=selection,
        scheme=scheme,
        outcome_probs=outcome_probs,
    )


def purify(
    rho1: DensityMatrix,
    rho2: DensityMatrix,
    scheme: Scheme | str = Scheme.BIT,
    selection: Selection | str = Selection.EE,
) -> PurificationOutcome:
    """Purify ``rho2`` (control, kept) using ``rho1`` (measured).

    Bit: bilateral CZ-based CNOTs Q2 -> Q1, then Z readout of Q1. Phase: Y/2 on
    all four qubits, the bit circuit, then -Y/2 on the kept pair.
    """
    scheme, selection = Scheme(scheme), Selection(selection)
    branches = purification_branches(rho1, rho2, scheme)
    probs = {outcome: weight for outcome, (_, weight) in branches.items()}
    total = sum(probs.values())
    if abs(total - 1.0) > settings.TRACE_TOL:
        logger.warning("Purification outcome weights sum to %.12f", total)
    outcome = _kept(branches, _KEPT[selection], scheme, selection.value, probs)
    logger.debug(
        "%s purification (%s): F=%.6f, success=%.6f",
        scheme.value,
        selection.value,
        outcome.fidelity,
        outcome.success_prob,
    )
    return outcome


def purify_all_outcomes(
    rho1: DensityMatrix, rho2: DensityMatrix, scheme: Scheme | str = Scheme.BIT
) -> dict[str, PurificationOutcome | None]:
    """One outcome per measured bitstring; None where the weight vanishes."""
    scheme = Scheme(scheme)
    branches = purification_branches(rho1, rho2, scheme)
    probs = {outcome: weight for outcome, (_, weight) in branches.items()}
    results = {}
    for outcome in OUTCOMES:
        try:
            results[outcome] = _kept(branches, (outcome,), scheme, outcome, probs)
        except UndefinedPostStateError:
            results[outcome] = None
    return results


def purify_double_selection(
    rho1: DensityMatrix, rho2: DensityMatrix, rho3: DensityMatrix
) -> PurificationOutcome:
    """Bit round Q2 -> Q1, a second bilateral CNOT Q3 -> Q1, X readout of Q3.

    Kept when Q1 reads anti-correlated and Q3 correlated.
    """
    branches = double_selection_branches(rho1, rho2, rho3)
    probs = {q1 + q3: weight for (q1, q3), (_, weight) in branches.items()}
    outcome = _kept(branches, DOUBLE_KEPT, Scheme.DOUBLE, "double", probs)
    logger.debug(
        "Double-selection purification: F=%.6f, success=%.6f",
        outcome.fidelity,
        outcome.success_prob,
    )
    return outcome


def relabel_pair(rho: DensityMatrix, labels: tuple[str, str]) -> DensityMatrix:
    return DensityMatrix(space=CompositeSpace.qubits(*labels), entries=_pair_matrix(rho))


def ideal_bell_pair(labels: tuple[str, str] = CONTROL) -> DensityMatrix:
    return bell_state("psi-", labels).density()
