"""Parallel iSWAP transfer of a pair into the storage qubits"""

import logging

import numpy as np

from channels import ChannelKind, apply_channel, make_channel
from quantum import CompositeSpace, DensityMatrix, DimensionError, ParameterRangeError

from .gates import standard_gate

logger = logging.getLogger(__name__)

STORAGE = ("Q1A", "Q1B")


def transfer_to_storage(
    rho: DensityMatrix,
    efficiency: float = 1.0,
    labels: tuple[str, str] = STORAGE,
) -> DensityMatrix:
    """Move a pair from the communication qubits onto ``labels``.

    Each node runs an iSWAP between its communication and storage qubit from
    an empty storage qubit, so |e> picks up -i and the pair is relabeled. An
    ``efficiency`` below 1 loses the excitation with probability
    1 - efficiency on each side.
    """
    if rho.space.dims != (2, 2):
        raise DimensionError(f"Expected a two-qubit state, got dims {rho.space.dims}")
    if not 0.0 <= efficiency <= 1.0:
        raise ParameterRangeError(f"Transfer efficiency {efficiency} outside [0, 1]")

    # iSWAP restricted to |x>|g> -> |g>|x'>: g -> g, e -> -i e
    local = np.diag([1.0, -1j])
    phase = np.kron(local, local)
    moved = DensityMatrix(
        space=CompositeSpace.qubits(*labels),
        entries=phase @ rho.entries @ phase.conj().T,
    )
    if efficiency < 1.0:
        loss = make_channel(ChannelKind.AMPLITUDE_DAMPING, 1.0 - efficiency)
        for label in labels:
            moved = apply_channel(moved, loss, [label])
    logger.debug(
        "Transferred pair to %s (efficiency %.3f, %.1f ns)",
        labels,
        efficiency,
        standard_gate("iSWAP").duration_ns,
    )
    return moved
