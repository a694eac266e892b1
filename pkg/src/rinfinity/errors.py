"""Exception hierarchy shared by every module.

Input errors subclass ValueError so callers that only know the builtin
still catch them; failed witness checks subclass AssertionError and are
reported by the CLI with exit code 2.
"""


class RInfinityError(Exception):
    """Base class for all library errors."""


class InputError(RInfinityError, ValueError):
    """A precondition on the caller's input does not hold."""

    precondition = "valid input"

    def __init__(self, message: str = ""):
        super().__init__(message or self.precondition)


class NotUnimodular(InputError):
    precondition = "determinant must be +1 or -1"


class NotSL(InputError):
    precondition = "determinant must be +1"


class ScalarMatrix(InputError):
    precondition = "matrix must not be scalar"


class NotAnosov(InputError):
    precondition = "matrix must be Anosov (hyperbolic, det = +-1)"


class WrongDeterminant(InputError):
    precondition = "matrix must have determinant +1"


class EmptyWord(InputError):
    precondition = "word must be non-empty"


class InvalidAutomorphism(InputError):
    precondition = "S must satisfy S*A*S^-1 = A^eps"


class NotAGroup(InputError):
    precondition = "multiplication table must define a group"


class NotAutomorphism(InputError):
    precondition = "map must be a bijective homomorphism"


class OrderNotFinite(InputError):
    precondition = "matrix must have finite order modulo m"


class DoesNotDescend(InputError):
    precondition = "automorphism must descend to the finite quotient"


class NoValidQuotient(InputError):
    precondition = "a finite quotient within the configured limits"


class OutOfRange(InputError):
    precondition = "index must lie in the table range"


class InvalidDescriptor(InputError):
    precondition = "geometry descriptor must satisfy its invariants"


class MatrixMismatch(InputError):
    precondition = "exponent sums must equal the intended matrix"


class MalformedInput(InputError):
    precondition = "input must be well formed"


class WitnessVerificationError(RInfinityError, AssertionError):
    """An internally produced certificate failed exact re-verification."""


def verify(condition: bool, message: str) -> None:
    """Raise WitnessVerificationError unless ``condition`` holds."""
    if not condition:
        raise WitnessVerificationError(message)
