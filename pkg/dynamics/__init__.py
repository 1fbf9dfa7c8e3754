"""Hamiltonians, Lindblad integration and cable experiments"""

from .cable import (
    InfidelityBudget,
    RingdownFit,
    TimeSeries,
    bell_fidelity,
    bell_schedule,
    collapse_for_layout,
    first_minimum_time,
    fit_ringdown,
    generate_bell_via_cable,
    infidelity_budget,
    simulate_cable_ringdown,
    simulate_vacuum_rabi,
)
from .coupler import (
    coupler_strength,
    g_from_mutual,
    infer_junction_inductance,
    max_coupling_strength,
    mutual_inductance,
)
from .hamiltonian import CableLayout, PulseSchedule, Segment, build_hamiltonian
from .lindblad import (
    CollapseSet,
    CollapseTerm,
    Trajectory,
    evolve_constant,
    lindblad_evolve,
    liouvillian,
    rk4_step_matrix,
)
from .params import (
    DEVICE_QUBITS,
    G12_DEFAULT,
    TWO_PI,
    BellLinkParams,
    CableParams,
    CouplerParams,
    QubitParams,
    mhz_to_rad_per_ns,
    rad_per_ns_to_mhz,
    rate_per_ns,
)

__all__ = [
    "BellLinkParams",
    "CableLayout",
    "CableParams",
    "CollapseSet",
    "CollapseTerm",
    "CouplerParams",
    "DEVICE_QUBITS",
    "G12_DEFAULT",
    "InfidelityBudget",
    "PulseSchedule",
    "QubitParams",
    "RingdownFit",
    "Segment",
    "TWO_PI",
    "TimeSeries",
    "Trajectory",
    "bell_fidelity",
    "bell_schedule",
    "build_hamiltonian",
    "collapse_for_layout",
    "coupler_strength",
    "evolve_constant",
    "first_minimum_time",
    "fit_ringdown",
    "g_from_mutual",
    "generate_bell_via_cable",
    "infer_junction_inductance",
    "infidelity_budget",
    "lindblad_evolve",
    "liouvillian",
    "max_coupling_strength",
    "mhz_to_rad_per_ns",
    "mutual_inductance",
    "rad_per_ns_to_mhz",
    "rate_per_ns",
    "rk4_step_matrix",
    "simulate_cable_ringdown",
    "simulate_vacuum_rabi",
]
