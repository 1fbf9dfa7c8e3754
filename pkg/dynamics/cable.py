"""Cable-mediated experiments: vacuum Rabi, ringdown and Bell-pair generation"""

import logging
import math

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy.optimize import curve_fit
from scipy.signal import argrelmin

from channels import (
    ChannelKind,
    apply_channel,
    bell_state,
    make_channel,
    quasi_static_dephasing_probability,
)
from quantum import (
    ComplexOperator,
    DensityMatrix,
    IntegrationError,
    ParameterRangeError,
    embed,
    partial_trace,
    state_fidelity,
)

from .hamiltonian import CableLayout, PulseSchedule, Segment, build_hamiltonian
from .lindblad import CollapseSet, CollapseTerm, lindblad_evolve
from .params import BellLinkParams, CableParams, rate_per_ns

logger = logging.getLogger(__name__)


class TimeSeries(BaseModel):
    """Observable sampled on a time grid (ns)."""

    model_config = ConfigDict(frozen=True)

    times_ns: tuple[float, ...]
    values: tuple[float, ...]
    observable: str = Field(description="Column name, e.g. 'Pe:Q2A'")


class RingdownFit(BaseModel):
    t1r_ns: float = Field(description="Fitted mode lifetime")
    t1r_stderr_ns: float
    amplitude: float
    offset: float


class InfidelityBudget(BaseModel):
    """Split of 1 - F(psi-) into population and coherence parts.

    ``population`` is the infidelity left with perfect coherence between the
    measured eg and ge populations; ``coherence`` is the rest.
    """

    fidelity: float
    population: float
    coherence: float

    @property
    def population_fraction(self) -> float:
        total = self.population + self.coherence
        return self.population / total if total > 0 else 0.0


def collapse_for_layout(
    layout: CableLayout,
    lifetimes: dict[str, tuple[float, float]],
    single_excitation: bool = True,
) -> CollapseSet:
    """Qubit T1 (lowering), qubit T_phi (sqrt(1/(2 T_phi)) sigma_z) and mode T1r losses.

    ``lifetimes`` maps qubit labels to (T1, T_phi) in µs.
    """
    terms = []
    if single_excitation:
        space = layout.excitation_space()
        n = space.total_dim

        def lowering(label: str) -> ComplexOperator:
            op = np.zeros((n, n))
            op[0, layout.site_index(label)] = 1.0
            return ComplexOperator(space=space, entries=op)

        def sigma_z(label: str) -> ComplexOperator:
            diag = np.ones(n)
            diag[layout.site_index(label)] = -1.0
            return ComplexOperator(space=space, entries=np.diag(diag))

    else:
        space = layout.full_space()

        def lowering(label: str) -> ComplexOperator:
            dim = space.dim_of(label)
            local = np.diag(np.sqrt(np.arange(1, dim)), k=1)
            return embed(local, [label], space)

        def sigma_z(label: str) -> ComplexOperator:
            return embed(np.diag([1.0, -1.0]), [label], space)

    for label in layout.qubit_labels:
        t1, t_phi = lifetimes.get(label, (math.inf, math.inf))
        terms.append(CollapseTerm(operator=lowering(label), rate=rate_per_ns(t1), name=f"T1:{label}"))
        terms.append(
            CollapseTerm(
                operator=sigma_z(label), rate=0.5 * rate_per_ns(t_phi), name=f"Tphi:{label}"
            )
        )
    mode_rate = 0.0 if math.isinf(layout.cable.T1r) else 1.0 / layout.cable.T1r
    for mode in layout.cable.mode_labels():
        terms.append(CollapseTerm(operator=lowering(mode), rate=mode_rate, name=f"T1r:{mode}"))
    return CollapseSet(terms=tuple(terms))


def _population_series(traj, layout: CableLayout, label: str) -> tuple[float, ...]:
    idx = layout.site_index(label)
    return tuple(float(np.real(state.entries[idx, idx])) for state in traj.states)


def simulate_vacuum_rabi(
    g: float,
    T1_eff: float,
    T_phi: float,
    T1r: float,
    t_max: float,
    cable: CableParams | None = None,
    n_points: int = 401,
    qubit: str = "Q2A",
) -> TimeSeries:
    """Excited qubit resonant with the central mode; returns P_e(t).

    ``g`` in rad/ns, ``T1_eff``/``T_phi`` in µs, ``T1r`` and ``t_max`` in ns.
    """
    if min(g, T1_eff, T_phi, T1r, t_max) <= 0:
        raise ParameterRangeError("Vacuum Rabi parameters must be positive")
    cable = (cable or CableParams()).model_copy(update={"T1r": T1r})
    layout = CableLayout(cable=cable, qubit_a=qubit, qubit_b=None)
    schedule = PulseSchedule(segments=(Segment(duration_ns=t_max, g_a=g, name="rabi"),))
    collapse = collapse_for_layout(layout, {qubit: (T1_eff, T_phi)})
    times = np.linspace(0.0, t_max, n_points)
    traj = lindblad_evolve(
        schedule,
        lambda seg: build_hamiltonian(layout, seg),
        collapse,
        layout.excited_state(qubit),
        times,
    )
    logger.info("Vacuum Rabi simulated over %.1f ns (g=%.5f rad/ns)", t_max, g)
    return TimeSeries(
        times_ns=traj.times,
        values=_population_series(traj, layout, qubit),
        observable=f"Pe:{qubit}",
    )


def first_minimum_time(series: TimeSeries) -> float:
    """Time of the first local minimum, refined by a parabola through three samples."""
    values = np.asarray(series.values)
    times = np.asarray(series.times_ns)
    minima = argrelmin(values)[0]
    if len(minima) == 0:
        raise IntegrationError(f"No local minimum in {series.observable}")
    i = int(minima[0])
    y0, y1, y2 = values[i - 1 : i + 2]
    denom = y0 - 2 * y1 + y2
    shift = 0.5 * (y0 - y2) / denom if denom != 0 else 0.0
    return float(times[i] + shift * (times[i + 1] - times[i]))


def simulate_cable_ringdown(
    delays_ns,
    swap_duration: float = 30.0,
    cable: CableParams | None = None,
    qubit_lifetimes: tuple[float, float] = (math.inf, math.inf),
    qubit: str = "Q2A",
) -> TimeSeries:
    """Excite, swap into the cable, wait, swap back; P_e against the wait time."""
    cable = cable or CableParams()
    layout = CableLayout(cable=cable, qubit_a=qubit, qubit_b=None)
    g = math.pi / (2 * swap_duration)
    collapse = collapse_for_layout(layout, {qubit: qubit_lifetimes})
    swap = Segment(duration_ns=swap_duration, g_a=g, name="swap")

    values = []
    for delay in delays_ns:
        segments = [swap]
        if delay > 0:
            segments.append(Segment(duration_ns=float(delay), name="idle"))
        segments.append(swap)
        schedule = PulseSchedule(segments=tuple(segments))
        traj = lindblad_evolve(
            schedule,
            lambda seg: build_hamiltonian(layout, seg),
            collapse,
            layout.excited_state(qubit),
            [schedule.total_ns],
        )
        values.append(_population_series(traj, layout, qubit)[0])
        logger.debug("Ringdown delay %.1f ns: Pe=%.5f", delay, values[-1])
    return TimeSeries(
        times_ns=tuple(float(t) for t in delays_ns),
        values=tuple(values),
        observable=f"Pe:{qubit}",
    )


def _decay(t, amplitude, lifetime, offset):
    return amplitude * np.exp(-t / lifetime) + offset


def fit_ringdown(series: TimeSeries) -> RingdownFit:
    times = np.asarray(series.times_ns)
    values = np.asarray(series.values)
    guess = (values[0] - values[-1], max(times[-1] / 3, 1.0), values[-1])
    popt, pcov = curve_fit(_decay, times, values, p0=guess, maxfev=10000)
    return RingdownFit(
        t1r_ns=float(popt[1]),
        t1r_stderr_ns=float(np.sqrt(pcov[1, 1])),
        amplitude=float(popt[0]),
        offset=float(popt[2]),
    )


def bell_schedule(t_d: float, params: BellLinkParams) -> PulseSchedule:
    segments = [Segment(duration_ns=params.half_swap_ns, g_a=params.g_a, name="half-swap")]
    if t_d > 0:
        segments.append(Segment(duration_ns=t_d, name="delay"))
    segments.append(Segment(duration_ns=params.full_swap_ns, g_b=params.g_b, name="catch"))
    return PulseSchedule(segments=tuple(segments))


def _exposure_ns(schedule: PulseSchedule, coupling: str) -> float:
    """Time from the first segment where ``coupling`` is on to the end of the schedule."""
    elapsed = 0.0
    for seg in schedule.segments:
        if getattr(seg, coupling) != 0:
            return schedule.total_ns - elapsed
        elapsed += seg.duration_ns
    return 0.0


def _quasi_static_envelope(
    rho: DensityMatrix, schedule: PulseSchedule, params: BellLinkParams
) -> DensityMatrix:
    """Gaussian dephasing of each qubit over the time it has held amplitude."""
    a, b = rho.space.labels
    exposures = {
        a: (_exposure_ns(schedule, "g_a"), params.qubit_a.T_phi),
        b: (_exposure_ns(schedule, "g_b"), params.qubit_b.T_phi),
    }
    for label, (duration_ns, t_phi_us) in exposures.items():
        p = quasi_static_dephasing_probability(duration_ns, t_phi_us)
        rho = apply_channel(rho, make_channel(ChannelKind.PHASE_DAMPING, p), [label])
    return rho


def generate_bell_via_cable(
    t_d: float, params: BellLinkParams | None = None, single_excitation: bool = True
) -> DensityMatrix:
    """Remote psi- over (Q2A, Q2B) through the cable.

    Q2A starts excited (ideal pi pulse), half its excitation is released in
    the first segment, the couplers idle for ``t_d``, and Q2B absorbs the
    travelling half. Q2A is excited for the whole sequence and Q2B from the
    start of the catch, which sets how long each sees quasi-static noise.
    """
    if t_d < 0:
        raise ParameterRangeError(f"Delay must be non-negative, got {t_d}")
    params = params or BellLinkParams()
    layout = CableLayout(cable=params.cable)
    schedule = bell_schedule(t_d, params)

    def collapse(seg: Segment) -> CollapseSet:
        lifetimes = {
            layout.qubit_a: params.qubit_lifetimes(params.qubit_a, seg.g_a != 0),
            layout.qubit_b: params.qubit_lifetimes(params.qubit_b, seg.g_b != 0),
        }
        return collapse_for_layout(layout, lifetimes, single_excitation)

    if single_excitation:
        rho0 = layout.excited_state(layout.qubit_a)
    else:
        full = layout.full_space()
        rho0 = DensityMatrix(
            space=full, entries=layout.to_full(layout.excited_state(layout.qubit_a))
        )
    traj = lindblad_evolve(
        schedule,
        lambda seg: build_hamiltonian(layout, seg, single_excitation),
        collapse,
        rho0,
        [schedule.total_ns],
    )
    final = traj.final()
    keep = [layout.qubit_a, layout.qubit_b]
    pair = layout.reduce(final, keep) if single_excitation else partial_trace(final, keep)
    if params.dephasing == "quasi-static":
        pair = _quasi_static_envelope(pair, schedule, params)
    return pair


def bell_fidelity(rho: DensityMatrix) -> float:
    return state_fidelity(rho, bell_state("psi-", rho.space.labels))


def infidelity_budget(rho: DensityMatrix) -> InfidelityBudget:
    eg = rho.population("eg")
    ge = rho.population("ge")
    fidelity = bell_fidelity(rho)
    coherent_bound = 0.5 * (eg + ge) + math.sqrt(max(eg * ge, 0.0))
    return InfidelityBudget(
        fidelity=fidelity,
        population=1.0 - coherent_bound,
        coherence=max(coherent_bound - fidelity, 0.0),
    )
