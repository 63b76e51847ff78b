"""Exception hierarchy shared by the rwlab modules."""


class RWLError(Exception):
    """Base class for all rwlab errors."""


class ParameterViolation(RWLError, ValueError):
    """A wave-speed family was constructed with inadmissible parameters."""


class NonFiniteInput(RWLError, ValueError):
    pass


class NonPositiveSpeed(RWLError, ValueError):
    pass


class LambdaOutOfRange(RWLError, ValueError):
    pass


class DomainViolation(RWLError, ValueError):
    pass


class ConfigError(RWLError, ValueError):
    """Bad or unknown configuration key; ``key`` names the offender."""

    def __init__(self, message, key=None):
        super().__init__(message)
        self.key = key


class SolverError(RWLError, RuntimeError):
    """Raised from inside the time loop.

    ``state`` is the offending state (if any) and ``trajectory`` holds the
    frames recorded before the failure, once ``simulate`` has attached it.
    """

    def __init__(self, message, state=None):
        super().__init__(message)
        self.state = state
        self.trajectory = None


class NonFiniteState(SolverError):
    pass


class BlowThresholdExceeded(SolverError):
    pass


class CurveLeftDomain(RWLError, RuntimeError):
    pass


class WrapHazard(UserWarning):
    """The periodic domain is too short for the run: waves may wrap around."""
