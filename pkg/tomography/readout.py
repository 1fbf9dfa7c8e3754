"""Per-qubit readout confusion and its inversion"""

import logging
from typing import Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from dynamics import DEVICE_QUBITS, QubitParams
from quantum import DimensionError, SingularConfusionError

logger = logging.getLogger(__name__)


class VisibilityMatrix(BaseModel):
    """Readout visibilities of one qubit.

    The confusion matrix maps true (g, e) probabilities to measured ones:
    [[F_g, 1 - F_e], [1 - F_g, F_e]].
    """

    model_config = ConfigDict(frozen=True)

    F_g: float = Field(default=1.0, ge=0.0, le=1.0)
    F_e: float = Field(default=1.0, ge=0.0, le=1.0)

    @model_validator(mode="after")
    def _check_invertible(self) -> "VisibilityMatrix":
        if self.F_g + self.F_e <= 1.0:
            raise SingularConfusionError(
                f"F_g + F_e = {self.F_g + self.F_e:.4f} must exceed 1 for correction"
            )
        return self

    @classmethod
    def from_qubit(cls, qubit: QubitParams | str) -> "VisibilityMatrix":
        if isinstance(qubit, str):
            qubit = DEVICE_QUBITS[qubit]
        return cls(F_g=qubit.F_g, F_e=qubit.F_e)

    def matrix(self) -> np.ndarray:
        return np.array([[self.F_g, 1 - self.F_e], [1 - self.F_g, self.F_e]])


class CorrectedProbabilities(BaseModel):
    """Corrected distribution plus the unclipped inversion result."""

    probs: tuple[float, ...]
    raw: tuple[float, ...] = Field(description="F^-1 P^M before clipping")
    clipped: bool = False


def confusion_matrix(vis: Sequence[VisibilityMatrix]) -> np.ndarray:
    """Tensor product of the per-qubit matrices, first qubit slowest."""
    total = np.eye(1)
    for v in vis:
        total = np.kron(total, v.matrix())
    return total


def _check_length(probs: np.ndarray, vis: Sequence[VisibilityMatrix]) -> None:
    if probs.shape != (2 ** len(vis),):
        raise DimensionError(
            f"{len(probs)} probabilities do not match {len(vis)} qubit visibilities"
        )


def apply_confusion(probs, vis: Sequence[VisibilityMatrix]) -> np.ndarray:
    probs = np.asarray(probs, dtype=float)
    _check_length(probs, vis)
    return confusion_matrix(vis) @ probs


def correct_readout(measured_probs, vis: Sequence[VisibilityMatrix]) -> CorrectedProbabilities:
    """P = (F_1 ⊗ F_2 ⊗ ...)^-1 P^M, clipped to [0, 1] and renormalized."""
    measured = np.asarray(measured_probs, dtype=float)
    _check_length(measured, vis)
    try:
        raw = np.linalg.solve(confusion_matrix(vis), measured)
    except np.linalg.LinAlgError as e:
        raise SingularConfusionError("Confusion matrix is singular") from e

    probs = np.clip(raw, 0.0, 1.0)
    clipped = bool(np.any(probs != raw))
    total = probs.sum()
    if total <= 0:
        raise SingularConfusionError("No probability left after clipping")
    probs = probs / total
    if clipped:
        logger.warning(
            "Corrected probabilities clipped (min %.4f, max %.4f)", raw.min(), raw.max()
        )
    return CorrectedProbabilities(
        probs=tuple(float(p) for p in probs),
        raw=tuple(float(p) for p in raw),
        clipped=clipped,
    )
