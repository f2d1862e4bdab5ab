"""Exception types shared across the package."""


class InterestFlowError(Exception):
    """Base class for all package errors."""


class ParameterError(InterestFlowError, ValueError):
    """A configuration or argument value is outside its valid range."""


class FitError(InterestFlowError, ValueError):
    """A regression cannot be performed on the given points."""


class SweepError(InterestFlowError, RuntimeError):
    """A simulation sweep produced no usable data."""


class InferenceError(InterestFlowError, ValueError):
    """Parameter inversion cannot proceed (empty or unusable surface)."""


class IngestError(InterestFlowError, ValueError):
    """An event log is malformed."""
