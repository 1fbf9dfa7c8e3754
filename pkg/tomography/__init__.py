"""Readout correction, state tomography and process tomography"""

from .process import (
    PREP_GATES,
    ChiMatrix,
    chi_from_io,
    chi_of_unitary,
    preparation_states,
    process_fidelity,
    process_tomography,
)
from .readout import (
    CorrectedProbabilities,
    VisibilityMatrix,
    apply_confusion,
    confusion_matrix,
    correct_readout,
)
from .records import load_records, save_records
from .state import (
    DEFAULT_REPEATS,
    DEFAULT_SHOTS,
    TOMOGRAPHY_GATES,
    MeasurementRecord,
    TomographyStats,
    all_settings,
    measure_all_settings,
    mixed_state_fidelity,
    pauli_basis,
    reconstruct_state,
    simulate_measurement,
    tomography_repeats,
)

__all__ = [
    "ChiMatrix",
    "CorrectedProbabilities",
    "DEFAULT_REPEATS",
    "DEFAULT_SHOTS",
    "MeasurementRecord",
    "PREP_GATES",
    "TOMOGRAPHY_GATES",
    "TomographyStats",
    "VisibilityMatrix",
    "all_settings",
    "apply_confusion",
    "chi_from_io",
    "chi_of_unitary",
    "confusion_matrix",
    "correct_readout",
    "load_records",
    "measure_all_settings",
    "mixed_state_fidelity",
    "pauli_basis",
    "preparation_states",
    "process_fidelity",
    "process_tomography",
    "reconstruct_state",
    "save_records",
    "simulate_measurement",
    "tomography_repeats",
]
