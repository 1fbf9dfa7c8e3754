"""Gates, purification, closed-form predictions and entanglement protection"""

from .analytic import (
    CombinedPostselect,
    DiscrepancyEntry,
    DiscrepancyReport,
    analytic_combined_postselect,
    analytic_purified_fidelity,
    combined_ee_oracle,
    discrepancy_report,
)
from .gates import (
    CZ_NS,
    GATE_NAMES,
    ISWAP_NS,
    GateOp,
    bilateral_cnot,
    circuit_unitary,
    compose_cnot,
    standard_gate,
)
from .protection import (
    CYCLE_BUFFER_NS,
    CYCLE_GATE_NS,
    EffectiveT2,
    ProtectionSeries,
    QuasiStaticNoise,
    calibrate_quasi_static_sigma,
    fit_effective_t2,
    protect_dd,
    protect_free,
    protect_rabi,
    reference_noise,
)
from .purification import (
    CHECK,
    CONTROL,
    MEASURED,
    OUTCOMES,
    PurificationOutcome,
    Scheme,
    Selection,
    double_selection_branches,
    ideal_bell_pair,
    kept_outcomes,
    purification_branches,
    purification_target,
    purify,
    purify_all_outcomes,
    purify_double_selection,
    relabel_pair,
)
from .storage import STORAGE, transfer_to_storage

__all__ = [
    "CHECK",
    "CONTROL",
    "CYCLE_BUFFER_NS",
    "CYCLE_GATE_NS",
    "CZ_NS",
    "CombinedPostselect",
    "DiscrepancyEntry",
    "DiscrepancyReport",
    "EffectiveT2",
    "GATE_NAMES",
    "GateOp",
    "ISWAP_NS",
    "MEASURED",
    "OUTCOMES",
    "ProtectionSeries",
    "PurificationOutcome",
    "QuasiStaticNoise",
    "STORAGE",
    "Scheme",
    "Selection",
    "analytic_combined_postselect",
    "analytic_purified_fidelity",
    "bilateral_cnot",
    "calibrate_quasi_static_sigma",
    "circuit_unitary",
    "combined_ee_oracle",
    "compose_cnot",
    "discrepancy_report",
    "double_selection_branches",
    "fit_effective_t2",
    "ideal_bell_pair",
    "kept_outcomes",
    "protect_dd",
    "protect_free",
    "protect_rabi",
    "reference_noise",
    "purification_branches",
    "purification_target",
    "purify",
    "purify_all_outcomes",
    "purify_double_selection",
    "relabel_pair",
    "standard_gate",
    "transfer_to_storage",
]
