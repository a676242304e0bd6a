"""
Custom exceptions for the enumeration module.
"""
from app.core.exceptions import EXIT_CHECK_FAILED, LabException


class EnumerationException(LabException):
    """Base exception for all enumeration errors."""
    pass


class NotPositiveDefiniteError(EnumerationException):
    """Raised when a quadratic form is not positive-definite."""

    def __init__(self, dimension):
        self.dimension = dimension
        super().__init__(f"The {dimension}-dimensional quadratic form is not positive-definite")


class UnboundedBodyError(EnumerationException):
    """Raised when a gauge does not define a bounded body."""

    def __init__(self, description):
        self.description = description
        super().__init__(f"Gauge {description} defines an unbounded body")


class RankTwoRequiredError(EnumerationException):
    """Raised when a planar routine receives a lattice of another rank."""

    def __init__(self, rank):
        self.rank = rank
        super().__init__(f"Expected a rank-2 lattice, got rank {rank}")


class ReductionDidNotConvergeError(EnumerationException):
    """Raised when LLL reduction exceeds its iteration cap."""

    exit_code = EXIT_CHECK_FAILED

    def __init__(self, iterations):
        self.iterations = iterations
        super().__init__(f"LLL reduction did not terminate after {iterations} iterations")
