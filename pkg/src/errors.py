"""
Exception hierarchy for Spin Symbols Lab

Every library error derives from SpinLabError. Configuration problems derive from
ConfigError, which the CLI maps to exit code 2; everything else maps to exit code 1.
"""


class SpinLabError(Exception):
    """Base class for all library errors."""


class ConfigError(SpinLabError):
    """Invalid experiment configuration or unreadable input file."""


# Field presentation and validation

class StructuralFailure(SpinLabError):
    """A field spec violates one of its structural invariants."""

    def __init__(self, invariant: str, detail: str = ""):
        self.invariant = invariant
        self.detail = detail
        message = f"{invariant}: {detail}" if detail else invariant
        super().__init__(message)


class UnitConditionFailed(SpinLabError):
    """A totally real spec claims the unit condition but a totally positive non-square unit exists."""


class PrecisionExhausted(SpinLabError):
    """Numeric precision doubling hit its ceiling without passing the exact cross-check."""


class FNotSquarefree(SpinLabError):
    """The norms of the class representatives do not multiply to a squarefree integer."""


# Primes and ideals

class RamifiedPrime(SpinLabError):
    """The rational prime divides the field discriminant."""


class EvenPrime(SpinLabError):
    """The rational prime is 2."""


class GeneratorNotFound(SpinLabError):
    """Short-vector search exhausted its budget without finding a generator."""


class NotAchievable(SpinLabError):
    """No unit adjusts the element to total positivity."""


class CeilingExceeded(SpinLabError):
    """Requested work exceeds the configured enumeration ceiling."""


# Symbols

class EvenModulus(SpinLabError):
    """Jacobi symbol requested for an even or non-positive modulus."""


class FactoringBudgetExceeded(SpinLabError):
    """Integer factorization did not finish within the trial-division and rho budget."""


class EvenArgument(SpinLabError):
    """A symbol denominator has even norm."""


class InconsistentCell(SpinLabError):
    """Two samples in one mod-8 cell disagree."""


class UnpopulatedCell(SpinLabError):
    """A mod-8 cell was never observed while deriving the table."""


class ZeroSymbolEncountered(SpinLabError):
    """A symbol required to be nonzero vanished (coprimality violated)."""


# Class groups

class NotFundamental(SpinLabError):
    """Discriminant is not a negative fundamental discriminant."""


class DiscriminantMismatch(SpinLabError):
    """Forms of different discriminants cannot be composed."""


class WrongResidueClass(SpinLabError):
    """The prime is not congruent to 1 mod 4."""


# Experiments

class InsufficientWitnesses(SpinLabError):
    """The scan range produced fewer witness pairs than requested."""


class BadModulus(SpinLabError):
    """Character-sum modulus is not an odd squarefree integer > 1, or divides the step."""
