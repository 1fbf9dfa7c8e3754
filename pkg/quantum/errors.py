"""Exception hierarchy shared by every simulator package"""


class BellnetError(Exception):
    """Base class for all simulator errors."""

    pass


class NumericError(BellnetError):
    """Numerical or physical-validity failure."""

    pass


class ParameterRangeError(NumericError, ValueError):
    """Physical parameter outside its allowed range."""

    pass


class LabelError(NumericError):
    """Unknown or duplicate subsystem label."""

    pass


class DimensionError(NumericError):
    """Operator or state dimension does not match its space."""

    pass


class NonPhysicalStateError(NumericError):
    """Matrix violates Hermiticity, trace or positivity beyond tolerance."""

    pass


class DegenerateInputError(NumericError):
    """Input carries no weight after projection onto physical states."""

    pass


class IntegrationError(NumericError):
    """Master-equation integration failed."""

    pass


class StepSizeError(IntegrationError):
    """Richardson check failed; transient, retried with a smaller step."""

    def __init__(self, message: str, deviation: float, dt: float):
        super().__init__(message)
        self.deviation = deviation
        self.dt = dt


class SingularCouplerError(NumericError):
    """Coupler phase too close to the cos(delta) = 0 singularity."""

    pass


class UndefinedPostStateError(NumericError):
    """Selected measurement outcome has zero probability."""

    pass


class SingularConfusionError(NumericError):
    """Readout confusion matrix is not invertible."""

    pass


class UnknownGateError(NumericError):
    pass


class UnknownStateError(NumericError):
    pass


class ConfigError(BellnetError):
    """Invalid experiment configuration."""

    pass
