"""Fixed-step RK4 integration of the Lindblad master equation

dρ/dt = -i[H, ρ] + Σ γ (L ρ L† - ½{L†L, ρ})

The generator is vectorized (row-major vec) per piecewise-constant segment.
For a linear generator one RK4 step of size h is the polynomial
P = I + hL + (hL)²/2 + (hL)³/6 + (hL)⁴/24, so whole intervals are propagated
with powers of P. Each result is compared against a run at half the step; a
mismatch above RICHARDSON_TOL is retried with the step halved.
"""

import logging
import math
from typing import Callable

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from tenacity import Retrying, retry_if_exception_type, stop_after_attempt

from config import settings
from quantum import (
    ComplexOperator,
    DensityMatrix,
    DimensionError,
    IntegrationError,
    StepSizeError,
)

from .hamiltonian import PulseSchedule, Segment

logger = logging.getLogger(__name__)


class CollapseTerm(BaseModel):
    model_config = ConfigDict(frozen=True)

    operator: ComplexOperator
    rate: float = Field(ge=0, description="Rate in 1/ns")
    name: str = ""


class CollapseSet(BaseModel):
    model_config = ConfigDict(frozen=True)

    terms: tuple[CollapseTerm, ...] = ()

    def active(self) -> list[CollapseTerm]:
        return [term for term in self.terms if term.rate > 0]


class Trajectory(BaseModel):
    """States on the requested time grid."""

    model_config = ConfigDict(frozen=True)

    times: tuple[float, ...]
    states: tuple[DensityMatrix, ...]
    dt_ns: float = Field(description="Step size of the accepted run")
    refinements: int = Field(default=0, description="Step halvings needed")
    max_deviation: float | None = Field(
        default=None, description="Max entry change against the half-step run"
    )

    def final(self) -> DensityMatrix:
        return self.states[-1]

    def series(self, fn: Callable[[DensityMatrix], float]) -> list[float]:
        return [fn(state) for state in self.states]


Builder = Callable[[Segment], ComplexOperator]
CollapseBuilder = Callable[[Segment], CollapseSet]


def liouvillian(h: np.ndarray, collapse: list[CollapseTerm]) -> np.ndarray:
    """Superoperator acting on row-major vec(ρ): vec(A ρ B) = (A ⊗ Bᵀ) vec(ρ)."""
    d = h.shape[0]
    eye = np.eye(d)
    gen = -1j * (np.kron(h, eye) - np.kron(eye, h.T))
    for term in collapse:
        op = term.operator.entries
        op_dag_op = op.conj().T @ op
        gen += term.rate * (
            np.kron(op, op.conj())
            - 0.5 * np.kron(op_dag_op, eye)
            - 0.5 * np.kron(eye, op_dag_op.T)
        )
    return gen


def rk4_step_matrix(gen: np.ndarray, step: float) -> np.ndarray:
    hl = step * gen
    hl2 = hl @ hl
    hl3 = hl2 @ hl
    return np.eye(len(gen)) + hl + hl2 / 2 + hl3 / 6 + hl3 @ hl / 24


def _cleanup(vec: np.ndarray, d: int) -> np.ndarray:
    rho = vec.reshape(d, d)
    rho = 0.5 * (rho + rho.conj().T)
    trace = np.real(np.trace(rho))
    if trace > 0:
        rho = rho / trace
    return rho.reshape(-1)


def _propagate(step_matrix: np.ndarray, vec: np.ndarray, n_steps: int) -> np.ndarray:
    if len(step_matrix) <= settings.DENSE_POWER_MAX_DIM:
        return np.linalg.matrix_power(step_matrix, n_steps) @ vec
    for _ in range(n_steps):
        vec = step_matrix @ vec
    return vec


def _integrate(
    schedule: PulseSchedule,
    builder: Builder,
    collapse: CollapseBuilder,
    rho0: DensityMatrix,
    t_grid: np.ndarray,
    dt: float,
) -> list[np.ndarray]:
    d = rho0.space.total_dim
    edges = schedule.boundaries()
    events = sorted({float(t) for t in t_grid} | {e for e in edges if e < t_grid[-1]})
    grid = {float(t) for t in t_grid}

    generators: dict[int, np.ndarray] = {}
    vec = rho0.entries.reshape(-1).astype(complex)
    outputs = []
    now = 0.0
    for target in events:
        if target > now:
            seg_idx = max(i for i, start in enumerate(edges[:-1]) if start <= now + 1e-12)
            if seg_idx not in generators:
                segment = schedule.segments[seg_idx]
                h = builder(segment).entries
                if h.shape != (d, d):
                    raise DimensionError(
                        f"Hamiltonian dimension {h.shape[0]} does not match state dimension {d}"
                    )
                generators[seg_idx] = liouvillian(h, collapse(segment).active())
                logger.debug(
                    "Segment %d '%s' generator built (dim %d)",
                    seg_idx,
                    schedule.segments[seg_idx].name,
                    d,
                )
            span = target - now
            n_steps = max(1, math.ceil(span / dt - 1e-9))
            step_matrix = rk4_step_matrix(generators[seg_idx], span / n_steps)
            vec = _cleanup(_propagate(step_matrix, vec, n_steps), d)
            now = target
        if target in grid:
            outputs.append(vec.reshape(d, d).copy())
    return outputs


def lindblad_evolve(
    schedule: PulseSchedule,
    builder: Builder,
    collapse: CollapseSet | CollapseBuilder,
    rho0: DensityMatrix,
    t_grid,
    dt: float | None = None,
    check_convergence: bool = True,
) -> Trajectory:
    """Integrate from t=0 through ``schedule`` and return states on ``t_grid``.

    ``builder`` maps a segment to its Hamiltonian; ``collapse`` is fixed or
    per segment. Grid times are in ns, strictly increasing, within the schedule.
    """
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.ndim != 1 or len(t_grid) == 0:
        raise IntegrationError("t_grid must be a non-empty 1-d sequence")
    if np.any(np.diff(t_grid) <= 0):
        raise IntegrationError("t_grid must be strictly increasing")
    if t_grid[0] < 0 or t_grid[-1] > schedule.total_ns + 1e-9:
        raise IntegrationError(
            f"t_grid [{t_grid[0]}, {t_grid[-1]}] outside schedule [0, {schedule.total_ns}]"
        )
    collapse_fn = collapse if callable(collapse) else (lambda _segment: collapse)
    base_dt = settings.RK4_DT_NS if dt is None else dt

    def attempt_run(step: float) -> tuple[list[np.ndarray], float | None]:
        coarse = _integrate(schedule, builder, collapse_fn, rho0, t_grid, step)
        if not check_convergence:
            return coarse, None
        fine = _integrate(schedule, builder, collapse_fn, rho0, t_grid, step / 2)
        deviation = max(float(np.max(np.abs(a - b))) for a, b in zip(coarse, fine))
        if deviation > settings.RICHARDSON_TOL:
            raise StepSizeError(
                f"Step {step} ns changes states by {deviation:.3e}", deviation, step
            )
        return fine, deviation

    step = base_dt
    refinements = 0
    try:
        for attempt in Retrying(
            retry=retry_if_exception_type(StepSizeError),
            stop=stop_after_attempt(settings.MAX_STEP_REFINEMENTS + 1),
            reraise=True,
        ):
            with attempt:
                refinements = attempt.retry_state.attempt_number - 1
                step = base_dt / 2**refinements
                if refinements:
                    logger.warning("Refining integration step to %.4g ns", step)
                states, deviation = attempt_run(step)
    except StepSizeError as e:
        raise IntegrationError(
            f"No convergence after {settings.MAX_STEP_REFINEMENTS} step halvings: "
            f"last deviation {e.deviation:.3e} at dt={e.dt} ns "
            f"(tolerance {settings.RICHARDSON_TOL:.1e})"
        ) from e

    space = rho0.space
    return Trajectory(
        times=tuple(float(t) for t in t_grid),
        states=tuple(DensityMatrix.from_cleaned(space, rho) for rho in states),
        dt_ns=step / 2 if check_convergence else step,
        refinements=refinements,
        max_deviation=deviation,
    )


def evolve_constant(
    h: ComplexOperator,
    collapse: CollapseSet,
    rho0: DensityMatrix,
    t_grid,
    **kwargs,
) -> Trajectory:
    """Time-independent convenience wrapper."""
    t_grid = np.asarray(t_grid, dtype=float)
    schedule = PulseSchedule(segments=(Segment(duration_ns=float(t_grid[-1]), name="constant"),))
    return lindblad_evolve(schedule, lambda _segment: h, collapse, rho0, t_grid, **kwargs)
