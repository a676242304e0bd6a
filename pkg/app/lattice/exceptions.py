"""
Custom exceptions for the lattice module.

These exceptions cover degenerate inputs to exact lattice constructions
and failures of the Eichler order search.
"""
from app.core.exceptions import EXIT_CHECK_FAILED, LabException


class LatticeException(LabException):
    """Base exception for all lattice errors."""
    pass


class NotSquarefreeError(LatticeException):
    """Raised when a level is not a positive squarefree integer."""

    def __init__(self, level):
        self.level = level
        super().__init__(f"Level {level} is not a positive squarefree integer")


class UnsupportedDiscriminantError(LatticeException):
    """Raised when no builtin maximal order exists for a discriminant."""

    def __init__(self, d_B, supported):
        self.d_B = d_B
        self.supported = tuple(supported)
        super().__init__(
            f"No builtin maximal order for d_B={d_B}; supported: {self.supported}")


class LevelNotCoprimeError(LatticeException):
    """Raised when an Eichler level shares a prime with the discriminant."""

    def __init__(self, level, d_B):
        self.level = level
        self.d_B = d_B
        super().__init__(f"Level {level} is not coprime to d_B={d_B}")


class EichlerSearchExhaustedError(LatticeException):
    """Raised when no index-p suborder was found for some p | N."""

    exit_code = EXIT_CHECK_FAILED

    def __init__(self, prime, level):
        self.prime = prime
        self.level = level
        super().__init__(
            f"No level-{prime} suborder found while building the level-{level} Eichler order")


class InvalidDivisorError(LatticeException):
    """Raised when ℓ does not divide d_B·N."""

    def __init__(self, ell, modulus):
        self.ell = ell
        self.modulus = modulus
        super().__init__(f"ℓ={ell} does not divide d_B·N={modulus}")


class DegenerateGramError(LatticeException):
    """Raised when a Gram matrix (or basis) is singular."""

    def __init__(self, rank):
        self.rank = rank
        super().__init__(f"Degenerate rank-{rank} Gram matrix or basis")


class SingularMatrixError(LatticeException):
    """Raised when a matrix that must be inverted is singular."""

    def __init__(self, size):
        self.size = size
        super().__init__(f"Singular {size}x{size} matrix")


class RankMismatchError(LatticeException):
    """Raised when an operation needs a lattice of a different rank."""

    def __init__(self, expected, actual):
        self.expected = expected
        self.actual = actual
        super().__init__(f"Expected a rank-{expected} lattice, got rank {actual}")


class NotInLatticeError(LatticeException):
    """Raised when coordinates are requested for a vector outside the lattice span."""

    def __init__(self, vector):
        self.vector = vector
        super().__init__(f"{vector} is not in the rational span of the lattice")
