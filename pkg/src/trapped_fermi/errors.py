"""Exception hierarchy shared by all modules."""


class TrappedFermiError(Exception):
    """Base class for every error raised by this package."""


class InvalidInputError(TrappedFermiError, ValueError):
    """An argument lies outside the domain of the requested quantity."""


class RangeError(TrappedFermiError, OverflowError):
    """A result is not representable in double precision."""


class NumericalError(TrappedFermiError, RuntimeError):
    """An iterative solver failed to converge.

    ``diagnostics`` holds whatever state the solver had when it gave up.
    """

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})


class NumericalConsistencyError(NumericalError):
    """Two evaluation routes for the same quantity disagree."""


class SolvabilityError(NumericalError):
    """The Fermi-energy cubic has no admissible positive root."""

    def __init__(self, message, classification=None, diagnostics=None):
        super().__init__(message, diagnostics)
        self.classification = classification


class DomainError(TrappedFermiError, ValueError):
    """A closed-form correction leaves the range where it is meaningful."""


class ResourceError(TrappedFermiError, MemoryError):
    """A brute-force sum would exceed its level budget."""
