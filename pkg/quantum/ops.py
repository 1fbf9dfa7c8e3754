"""Tensor structure, fidelities and physicality enforcement"""

import logging
import string
from typing import Iterable, TypeVar

import numpy as np

from config import settings

from .errors import DegenerateInputError, DimensionError, LabelError
from .space import CompositeSpace
from .states import ComplexOperator, DensityMatrix, PureState

logger = logging.getLogger(__name__)

Op = TypeVar("Op", ComplexOperator, DensityMatrix)


def tensor_product(a: Op, b: Op) -> Op:
    """Kronecker product; ``a`` is the slower-varying factor.

    Two density matrices give a density matrix, anything else an operator.
    """
    space = a.space.concat(b.space)
    entries = np.kron(a.entries, b.entries)
    if isinstance(a, DensityMatrix) and isinstance(b, DensityMatrix):
        return DensityMatrix(space=space, entries=entries)
    return ComplexOperator(space=space, entries=entries)


def tensor_all(*factors: Op) -> Op:
    result = factors[0]
    for factor in factors[1:]:
        result = tensor_product(result, factor)
    return result


def embed(
    op: ComplexOperator | np.ndarray,
    target_labels: Iterable[str],
    full_space: CompositeSpace,
) -> ComplexOperator:
    """Act with ``op`` on ``target_labels`` and identity elsewhere.

    ``op`` is ordered like ``target_labels``; targets need not be adjacent or
    in ``full_space`` order.
    """
    targets = tuple(target_labels)
    if len(set(targets)) != len(targets):
        raise LabelError(f"Repeated target labels: {targets}")
    for label in targets:
        full_space.index_of(label)

    matrix = op.entries if isinstance(op, ComplexOperator) else np.asarray(op, complex)
    target_dims = [full_space.dim_of(label) for label in targets]
    if matrix.shape != (int(np.prod(target_dims)),) * 2:
        raise DimensionError(
            f"Operator shape {matrix.shape} does not match targets {targets} "
            f"with dims {target_dims}"
        )

    rest = [label for label in full_space.labels if label not in targets]
    order = list(targets) + rest
    order_dims = [full_space.dim_of(label) for label in order]
    rest_dim = int(np.prod([full_space.dim_of(label) for label in rest]))

    big = np.kron(matrix, np.eye(rest_dim)).reshape(order_dims + order_dims)
    perm = [order.index(label) for label in full_space.labels]
    n = len(order)
    big = big.transpose(perm + [n + p for p in perm])
    total = full_space.total_dim
    return ComplexOperator(space=full_space, entries=big.reshape(total, total))


def partial_trace_matrix(
    matrix: np.ndarray, space: CompositeSpace, keep_labels: Iterable[str]
) -> tuple[np.ndarray, CompositeSpace]:
    """Raw partial trace; kept subsystems come out in ``keep_labels`` order."""
    keep = tuple(keep_labels)
    if not keep:
        raise LabelError("keep_labels must be non-empty")
    keep_idx = [space.index_of(label) for label in keep]
    if len(set(keep_idx)) != len(keep_idx):
        raise LabelError(f"Repeated labels in {keep}")

    n = len(space.dims)
    letters = string.ascii_letters
    rows = list(letters[:n])
    cols = list(letters[n : 2 * n])
    for i in range(n):
        if i not in keep_idx:
            cols[i] = rows[i]
    out = "".join(rows[i] for i in keep_idx) + "".join(cols[i] for i in keep_idx)
    subscripts = "".join(rows) + "".join(cols) + "->" + out

    tensor = matrix.reshape(list(space.dims) * 2)
    reduced = np.einsum(subscripts, tensor)
    sub = space.subspace(keep)
    return reduced.reshape(sub.total_dim, sub.total_dim), sub


def partial_trace(rho: DensityMatrix, keep_labels: Iterable[str]) -> DensityMatrix:
    reduced, sub = partial_trace_matrix(rho.entries, rho.space, keep_labels)
    return DensityMatrix(space=sub, entries=reduced)


def state_fidelity(rho: DensityMatrix, target: PureState) -> float:
    """<target|rho|target>, clamped to [0, 1]."""
    if rho.space != target.space:
        raise DimensionError(
            f"State space {rho.space.labels} does not match target {target.space.labels}"
        )
    psi = target.amplitudes
    value = float(np.real(np.vdot(psi, rho.entries @ psi)))
    return _clamp_unit(value)


def _clamp_unit(value: float) -> float:
    tol = settings.FIDELITY_CLAMP_TOL
    if value < -tol or value > 1 + tol:
        logger.warning("Fidelity %.12f outside [0, 1] beyond tolerance", value)
    return min(max(value, 0.0), 1.0)


def nearest_physical_state(
    h: ComplexOperator | np.ndarray, space: CompositeSpace | None = None
) -> DensityMatrix:
    """Hermitian part, negative eigenvalues clipped to zero, unit trace."""
    if isinstance(h, ComplexOperator):
        matrix, space = h.entries, h.space
    else:
        matrix = np.asarray(h, dtype=complex)
        if space is None:
            raise DimensionError("A raw matrix needs an explicit space")
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise DimensionError(f"Expected a square matrix, got shape {matrix.shape}")

    herm = 0.5 * (matrix + matrix.conj().T)
    eigvals, eigvecs = np.linalg.eigh(herm)
    clipped = np.clip(eigvals, 0.0, None)
    total = float(np.sum(clipped))
    if total <= settings.PSD_TOL:
        raise DegenerateInputError("No positive weight left after eigenvalue clipping")
    clipped /= total
    rho = (eigvecs * clipped) @ eigvecs.conj().T
    return DensityMatrix(space=space, entries=0.5 * (rho + rho.conj().T))
