"""Dense complex linear algebra over small labeled composite spaces"""

from .errors import (
    BellnetError,
    ConfigError,
    DegenerateInputError,
    DimensionError,
    IntegrationError,
    LabelError,
    NonPhysicalStateError,
    NumericError,
    ParameterRangeError,
    SingularConfusionError,
    SingularCouplerError,
    StepSizeError,
    UndefinedPostStateError,
    UnknownGateError,
    UnknownStateError,
)
from .ops import (
    embed,
    nearest_physical_state,
    partial_trace,
    partial_trace_matrix,
    state_fidelity,
    tensor_all,
    tensor_product,
)
from .space import LEVELS, CompositeSpace
from .states import ComplexOperator, DensityMatrix, PureState

# Single-qubit literals, basis order (g, e)
PAULI_I = [[1, 0], [0, 1]]
PAULI_X = [[0, 1], [1, 0]]
PAULI_Y = [[0, -1j], [1j, 0]]
PAULI_Z = [[1, 0], [0, -1]]
SIGMA_MINUS = [[0, 1], [0, 0]]

__all__ = [
    "BellnetError",
    "ComplexOperator",
    "CompositeSpace",
    "ConfigError",
    "DegenerateInputError",
    "DensityMatrix",
    "DimensionError",
    "IntegrationError",
    "LEVELS",
    "LabelError",
    "NonPhysicalStateError",
    "NumericError",
    "ParameterRangeError",
    "PAULI_I",
    "PAULI_X",
    "PAULI_Y",
    "PAULI_Z",
    "PureState",
    "SIGMA_MINUS",
    "SingularConfusionError",
    "SingularCouplerError",
    "StepSizeError",
    "UndefinedPostStateError",
    "UnknownGateError",
    "UnknownStateError",
    "embed",
    "nearest_physical_state",
    "partial_trace",
    "partial_trace_matrix",
    "state_fidelity",
    "tensor_all",
    "tensor_product",
]
