"""Idle decay of stored qubits as T1 / T_phi Kraus channels"""

import math
from typing import Mapping

from quantum import DensityMatrix, ParameterRangeError

from .kraus import ChannelKind, KrausChannel, apply_channel, make_channel


def damping_probability(duration_ns: float, t1_us: float) -> float:
    """1 - exp(-t/T1); zero for an infinite lifetime."""
    if math.isinf(t1_us):
        return 0.0
    return 1.0 - math.exp(-duration_ns / (t1_us * 1e3))


def dephasing_probability(duration_ns: float, t_phi_us: float) -> float:
    """Phase-damping strength whose coherence factor is exp(-t/T_phi)."""
    if math.isinf(t_phi_us):
        return 0.0
    return 1.0 - math.exp(-2.0 * duration_ns / (t_phi_us * 1e3))


def quasi_static_dephasing_probability(duration_ns: float, t_phi_us: float) -> float:
    """Phase-damping strength whose coherence factor is exp(-(t/T_phi)^2).

    The Gaussian envelope of a detuning that stays fixed within one shot and
    varies between shots.
    """
    if math.isinf(t_phi_us):
        return 0.0
    return 1.0 - math.exp(-2.0 * (duration_ns / (t_phi_us * 1e3)) ** 2)


def idle_channels(duration_ns: float, t1_us: float, t_phi_us: float) -> list[KrausChannel]:
    return [
        make_channel(ChannelKind.AMPLITUDE_DAMPING, damping_probability(duration_ns, t1_us)),
        make_channel(ChannelKind.PHASE_DAMPING, dephasing_probability(duration_ns, t_phi_us)),
    ]


def storage_decay(
    rho: DensityMatrix,
    lifetimes: Mapping[str, tuple[float, float]],
    duration_ns: float,
) -> DensityMatrix:
    """Apply per-qubit (T1, T_phi) decay, both in µs, for ``duration_ns``."""
    if duration_ns < 0:
        raise ParameterRangeError(f"Negative storage duration {duration_ns}")
    for label, (t1_us, t_phi_us) in lifetimes.items():
        for channel in idle_channels(duration_ns, t1_us, t_phi_us):
            rho = apply_channel(rho, channel, [label])
    return rho
