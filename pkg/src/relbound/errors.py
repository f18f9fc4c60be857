"""Exception types shared across the package."""


class RelboundError(Exception):
    """Base class for all relbound errors."""


class InvalidProfileError(RelboundError):
    """An operational profile violates its invariants."""


class InvalidDatasetError(RelboundError):
    """A measured dataset violates its invariants."""


class InvalidDecompositionError(RelboundError):
    """An error decomposition has a negative or overweight component."""


class InvalidDistributionError(RelboundError):
    """A discrete prior distribution violates its invariants."""


class InvalidCoverageError(RelboundError):
    """Verification coverage lies outside the input domain."""


class InfeasibleConstraintsError(RelboundError):
    """No prior distribution satisfies the stated partial knowledge."""


class ZeroEvidenceError(RelboundError):
    """Every admissible prior assigns zero probability to the observation."""


class SamplingFailureError(RelboundError):
    """Feasible-prior sampling exhausted its retry budget."""


class ParseError(RelboundError):
    """An input document could not be parsed; the message carries position info."""
