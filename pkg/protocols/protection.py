"""Entanglement protection under quasi-static detuning noise

Each trajectory draws one detuning per qubit and keeps it for the whole
storage window. States are held as (N, 4, 4) stacks so all trajectories
advance together; T1 damping and any residual white dephasing are applied as
Kraus maps per segment, which commute with the free phase evolution.
"""

import logging
import math

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy.optimize import brentq, curve_fit

from channels import (
    ChannelKind,
    bell_state,
    damping_probability,
    dephasing_probability,
    make_channel,
)
from quantum import DensityMatrix, DimensionError, ParameterRangeError, PureState, embed

logger = logging.getLogger(__name__)

CYCLE_GATE_NS = 30.0
CYCLE_BUFFER_NS = 5.0
RABI_SLICE_NS = 5.0

# Excitation number of (A, B) for basis order gg, ge, eg, ee
_EXCITATIONS = np.array([[0, 0], [0, 1], [1, 0], [1, 1]], dtype=float)
_XX = np.fliplr(np.eye(4)).astype(complex)


class QuasiStaticNoise(BaseModel):
    """Gaussian detunings, independent per qubit, constant per trajectory.

    ``white_t_phi_us`` adds Markovian dephasing that no pulse sequence
    refocuses; it bounds the coherence time DD and Rabi driving can reach.
    """

    model_config = ConfigDict(frozen=True)

    sigma_detuning: float = Field(ge=0.0, description="Std-dev per qubit, rad/ns")
    n_trajectories: int = Field(default=400, ge=1)
    white_t_phi_us: float = Field(
        default=math.inf, gt=0, description="Residual white dephasing time per qubit, µs"
    )
    seed: int

    def detunings(self) -> np.ndarray:
        """(n_trajectories, 2) draws; identical for every method given the seed."""
        rng = np.random.default_rng(self.seed)
        return rng.normal(0.0, self.sigma_detuning, size=(self.n_trajectories, 2))


class ProtectionSeries(BaseModel):
    model_config = ConfigDict(frozen=True)

    method: str = Field(description="free, dd or rabi")
    times_ns: tuple[float, ...]
    fidelity_mean: tuple[float, ...]
    fidelity_stderr: tuple[float, ...]
    n_traj: int

    def at(self, t_ns: float) -> float:
        index = int(np.argmin(np.abs(np.asarray(self.times_ns) - t_ns)))
        return self.fidelity_mean[index]


class EffectiveT2(BaseModel):
    """Per-qubit T2; a Bell coherence decays as exp(-2t/T2)."""

    t2_ns: float
    t2_stderr_ns: float
    initial: float
    floor: float


def _lifetimes(t1_us: float | tuple[float, float]) -> tuple[float, float]:
    if isinstance(t1_us, (int, float)):
        return float(t1_us), float(t1_us)
    return float(t1_us[0]), float(t1_us[1])


def _check_pair(rho0: DensityMatrix) -> None:
    if rho0.space.dims != (2, 2):
        raise DimensionError(f"Protection acts on a qubit pair, got dims {rho0.space.dims}")


def _damping_kraus(duration_ns: float, t1_us) -> list[np.ndarray]:
    """Joint amplitude-damping Kraus operators for both qubits over ``duration_ns``."""
    t1_a, t1_b = _lifetimes(t1_us)
    ops_a = make_channel(
        ChannelKind.AMPLITUDE_DAMPING, damping_probability(duration_ns, t1_a)
    ).matrices()
    ops_b = make_channel(
        ChannelKind.AMPLITUDE_DAMPING, damping_probability(duration_ns, t1_b)
    ).matrices()
    return [np.kron(a, b) for a in ops_a for b in ops_b]


def _idle_kraus(duration_ns: float, t1_us, white_t_phi_us: float = math.inf) -> list[np.ndarray]:
    """Damping of both qubits followed by their white dephasing, as one Kraus set."""
    damping = _damping_kraus(duration_ns, t1_us)
    p = dephasing_probability(duration_ns, white_t_phi_us)
    if p == 0.0:
        return damping
    ops = make_channel(ChannelKind.PHASE_DAMPING, p).matrices()
    dephasing = [np.kron(a, b) for a in ops for b in ops]
    return [d @ k for d in dephasing for k in damping]


def _depolarizing_kraus(p: float) -> list[np.ndarray]:
    ops = make_channel(ChannelKind.DEPOLARIZING, p).matrices()
    return [np.kron(a, b) for a in ops for b in ops]


def _apply_kraus(stack: np.ndarray, kraus: list[np.ndarray]) -> np.ndarray:
    return sum(k @ stack @ k.conj().T for k in kraus)


def _free_phase(stack: np.ndarray, energies: np.ndarray, duration_ns: float) -> np.ndarray:
    phase = np.exp(-1j * energies * duration_ns)
    return stack * phase[:, :, None] * phase.conj()[:, None, :]


def _fidelities(stack: np.ndarray, target: PureState) -> np.ndarray:
    psi = target.amplitudes
    return np.real(np.einsum("i,nij,j->n", psi.conj(), stack, psi))


def _series(method: str, times, samples: list[np.ndarray]) -> ProtectionSeries:
    values = np.array(samples)
    n = values.shape[1]
    stderr = values.std(axis=1, ddof=1) / math.sqrt(n) if n > 1 else np.zeros(len(values))
    return ProtectionSeries(
        method=method,
        times_ns=tuple(float(t) for t in times),
        fidelity_mean=tuple(float(v) for v in values.mean(axis=1)),
        fidelity_stderr=tuple(float(v) for v in stderr),
        n_traj=n,
    )


def _sample_times(total_ns: float, step_ns: float) -> np.ndarray:
    if total_ns < 0 or step_ns <= 0:
        raise ParameterRangeError("total time must be non-negative and the sample step positive")
    n = round(total_ns / step_ns)
    if abs(n * step_ns - total_ns) > 1e-9 * max(1.0, total_ns):
        raise ParameterRangeError(f"Total time {total_ns} ns is not a multiple of {step_ns} ns")
    return np.arange(n + 1) * step_ns


def _prepare(rho0: DensityMatrix, noise: QuasiStaticNoise, target: PureState | None):
    _check_pair(rho0)
    target = target or bell_state("psi-", rho0.space.labels)
    delta = noise.detunings()
    energies = delta @ _EXCITATIONS.T
    stack = np.broadcast_to(rho0.entries, (noise.n_trajectories, 4, 4)).astype(complex)
    return target, delta, energies, stack


def protect_free(
    rho0: DensityMatrix,
    total_ns: float,
    noise: QuasiStaticNoise,
    t1_us: float | tuple[float, float] = math.inf,
    sample_ns: float = 2 * (CYCLE_GATE_NS + CYCLE_BUFFER_NS),
    target: PureState | None = None,
) -> ProtectionSeries:
    """Unprotected storage: free phase evolution and T1 damping."""
    target, _, energies, stack = _prepare(rho0, noise, target)
    times = _sample_times(total_ns, sample_ns)
    step_kraus = _idle_kraus(sample_ns, t1_us, noise.white_t_phi_us)
    samples = [_fidelities(stack, target)]
    for _ in times[1:]:
        stack = _apply_kraus(_free_phase(stack, energies, sample_ns), step_kraus)
        samples.append(_fidelities(stack, target))
    return _series("free", times, samples)


def protect_dd(
    rho0: DensityMatrix,
    total_ns: float,
    noise: QuasiStaticNoise,
    t1_us: float | tuple[float, float] = math.inf,
    gate_ns: float = CYCLE_GATE_NS,
    buffer_ns: float = CYCLE_BUFFER_NS,
    gate_error: float = 0.0,
    target: PureState | None = None,
) -> ProtectionSeries:
    """Two X-on-both-qubits pulses per cycle, sampled at cycle boundaries.

    Pulses are instantaneous; the gate time is spent idling with the buffer.
    ``gate_error`` adds a depolarizing map on each qubit after every pulse.
    """
    half = gate_ns + buffer_ns
    if half <= 0:
        raise ParameterRangeError("DD half-cycle must be positive")
    target, _, energies, stack = _prepare(rho0, noise, target)
    times = _sample_times(total_ns, 2 * half)
    idle_kraus = _idle_kraus(half, t1_us, noise.white_t_phi_us)
    gate_kraus = _depolarizing_kraus(gate_error) if gate_error > 0 else None

    samples = [_fidelities(stack, target)]
    for _ in times[1:]:
        for _pulse in range(2):
            stack = _apply_kraus(_free_phase(stack, energies, half), idle_kraus)
            stack = _XX @ stack @ _XX
            if gate_kraus is not None:
                stack = _apply_kraus(stack, gate_kraus)
        samples.append(_fidelities(stack, target))
    logger.debug("DD run: %d cycles of %.1f ns", len(times) - 1, 2 * half)
    return _series("dd", times, samples)


def protect_rabi(
    rho0: DensityMatrix,
    total_ns: float,
    omega: float,
    noise: QuasiStaticNoise,
    t1_us: float | tuple[float, float] = math.inf,
    slice_ns: float = RABI_SLICE_NS,
    sample_ns: float = 2 * (CYCLE_GATE_NS + CYCLE_BUFFER_NS),
    target: PureState | None = None,
) -> ProtectionSeries:
    """Continuous X drive of Rabi frequency ``omega`` (rad/ns) on both qubits.

    The per-trajectory propagator over one slice comes from a batched
    eigendecomposition; damping is applied after every slice.
    """
    if omega < 0:
        raise ParameterRangeError(f"Rabi frequency must be non-negative, got {omega}")
    target, delta, _, stack = _prepare(rho0, noise, target)
    times = _sample_times(total_ns, sample_ns)
    per_sample = round(sample_ns / slice_ns)
    if abs(per_sample * slice_ns - sample_ns) > 1e-9:
        raise ParameterRangeError(f"Sample step {sample_ns} ns is not a multiple of {slice_ns} ns")

    space = rho0.space
    a, b = space.labels
    sigma_x = np.array([[0, 1], [1, 0]], dtype=complex)
    number = np.diag([0.0, 1.0]).astype(complex)
    x_a = embed(sigma_x, [a], space).entries
    x_b = embed(sigma_x, [b], space).entries
    drive = 0.5 * omega * (x_a + x_b)
    n_a = embed(number, [a], space).entries
    n_b = embed(number, [b], space).entries
    hamiltonians = (
        drive[None, :, :]
        + delta[:, 0, None, None] * n_a[None, :, :]
        + delta[:, 1, None, None] * n_b[None, :, :]
    )
    eigvals, eigvecs = np.linalg.eigh(hamiltonians)
    phases = np.exp(-1j * eigvals * slice_ns)
    unitaries = (eigvecs * phases[:, None, :]) @ eigvecs.conj().transpose(0, 2, 1)
    unitaries_dag = unitaries.conj().transpose(0, 2, 1)
    slice_kraus = _idle_kraus(slice_ns, t1_us, noise.white_t_phi_us)

    samples = [_fidelities(stack, target)]
    for _ in times[1:]:
        for _slice in range(per_sample):
            stack = _apply_kraus(unitaries @ stack @ unitaries_dag, slice_kraus)
        samples.append(_fidelities(stack, target))
    logger.debug("Rabi drive run at %.5f rad/ns over %.1f ns", omega, total_ns)
    return _series("rabi", times, samples)


def _ensemble_fidelity(
    damped: np.ndarray,
    sigma: float,
    at_ns: float,
    target: PureState,
    white_t_phi_us: float = math.inf,
) -> float:
    diff = _EXCITATIONS[:, None, :] - _EXCITATIONS[None, :, :]
    flipped = np.sum(diff**2, axis=-1)
    white_rate = 0.0 if math.isinf(white_t_phi_us) else 1.0 / (white_t_phi_us * 1e3)
    envelope = np.exp(-0.5 * sigma**2 * at_ns**2 * flipped - white_rate * at_ns * flipped)
    psi = target.amplitudes
    return float(np.real(psi.conj() @ (damped * envelope) @ psi))


def calibrate_quasi_static_sigma(
    rho0: DensityMatrix,
    target_fidelity: float,
    at_ns: float,
    t1_us: float | tuple[float, float] = math.inf,
    target: PureState | None = None,
    white_t_phi_us: float = math.inf,
) -> float:
    """Detuning spread giving ``target_fidelity`` after free storage of ``at_ns``.

    Uses the infinite-trajectory average, a Gaussian envelope
    exp(-sigma^2 t^2 k / 2) on each coherence with k flipped excitations,
    times exp(-k t / T_phi) for the white part.
    """
    _check_pair(rho0)
    if at_ns <= 0:
        raise ParameterRangeError("Calibration time must be positive")
    target = target or bell_state("psi-", rho0.space.labels)
    damped = _apply_kraus(rho0.entries[None, :, :], _damping_kraus(at_ns, t1_us))[0]

    def residual(sigma: float) -> float:
        return (
            _ensemble_fidelity(damped, sigma, at_ns, target, white_t_phi_us) - target_fidelity
        )

    upper = 10.0 / at_ns
    if residual(0.0) < 0 or residual(upper) > 0:
        raise ParameterRangeError(
            f"Fidelity {target_fidelity} at {at_ns} ns is outside the reachable range "
            f"[{residual(upper) + target_fidelity:.4f}, {residual(0.0) + target_fidelity:.4f}]"
        )
    sigma = float(brentq(residual, 0.0, upper, xtol=1e-14))
    logger.info(
        "Quasi-static sigma calibrated to %.4e rad/ns (F=%.3f at %.0f ns)",
        sigma,
        target_fidelity,
        at_ns,
    )
    return sigma


def reference_noise(noise: QuasiStaticNoise) -> QuasiStaticNoise:
    """Noiseless single trajectory, for the damping-only reference of a series."""
    return QuasiStaticNoise(sigma_detuning=0.0, n_trajectories=1, seed=noise.seed)


def _relaxation(t, initial, t2, floor):
    return floor + (initial - floor) * np.exp(-2.0 * t / t2)


def fit_effective_t2(
    series: ProtectionSeries,
    floor: float = 0.5,
    reference: ProtectionSeries | None = None,
) -> EffectiveT2:
    """Exponential fit of the Bell fidelity towards ``floor``.

    With a ``reference`` (the same protocol without dephasing noise) the fit
    runs on the ratio series / reference, so T1 losses drop out and only the
    dephasing is left in T2.
    """
    times = np.asarray(series.times_ns)
    values = np.asarray(series.fidelity_mean)
    if reference is not None:
        if reference.times_ns != series.times_ns:
            raise ParameterRangeError(
                f"Reference {reference.method} is sampled on a different time grid"
            )
        values = values / np.asarray(reference.fidelity_mean)

    def model(t, initial, t2):
        return _relaxation(t, initial, t2, floor)

    guess = (values[0], max(times[-1], 1.0))
    popt, pcov = curve_fit(model, times, values, p0=guess, maxfev=10000)
    return EffectiveT2(
        t2_ns=float(popt[1]),
        t2_stderr_ns=float(np.sqrt(pcov[1, 1])),
        initial=float(popt[0]),
        floor=floor,
    )
