"""Exception types shared across the package."""


class XiLadderError(Exception):
    """Base class for all package errors."""


class InvalidParameterError(XiLadderError):
    """A physical parameter violates its admissible range."""


class ConsistencyError(XiLadderError):
    """Two objects that must describe the same system do not."""


class InvalidStateError(XiLadderError):
    """A state vector fails a required property (e.g. normalization)."""


class NumericalFailureError(XiLadderError):
    """The eigensolver (or another numerical routine) did not converge."""


class IncompleteScanError(XiLadderError):
    """The sector scan hit its hard cap while the ground energy was still falling.

    Carries the partial scan record so the caller can inspect it and retry
    with a larger cap.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class ConvergenceFailureError(XiLadderError):
    """An iterative limit procedure did not reach its tolerance."""

    def __init__(self, message, last_distance=None):
        super().__init__(message)
        self.last_distance = last_distance
