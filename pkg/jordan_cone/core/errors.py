"""
errors.py — Exception hierarchy for JordanCone
"""


class JordanConeError(Exception):
    """Base class for every error raised by the library."""


class InvalidDescriptor(JordanConeError, ValueError):
    """An algebra descriptor or element payload is malformed."""


class AlgebraMismatch(JordanConeError, ValueError):
    """Operands live in different algebras."""


class DomainError(JordanConeError, ValueError):
    """An eigenvalue lies outside the domain of a spectral function."""


class BoundaryError(JordanConeError, ValueError):
    """An element required to be in the cone interior is not."""


class NonPositive(JordanConeError, ValueError):
    """An element has non-positive trace against the unit."""


class NotPositive(JordanConeError, ValueError):
    """A functional required to be positive has a negative part."""


class NotAProjection(JordanConeError, ValueError):
    """An element fails the idempotency test."""


class NotInHyperplane(JordanConeError, ValueError):
    """A functional does not vanish on the unit."""


class InvalidFace(JordanConeError, ValueError):
    """A face descriptor is degenerate or not of the required shape."""


class InvalidIsometry(JordanConeError, ValueError):
    """Isometry parameters are malformed (bad sign, non-orthogonal matrix, ...)."""


class NotAnIsometry(JordanConeError):
    """A supplied map fails the sampled isometry checks."""


class FactorizationFailed(JordanConeError):
    """The recovered factorization does not reproduce the supplied map."""


class EvaluationBudgetExceeded(FactorizationFailed):
    """A black-box map was evaluated more often than its declared budget."""


class UnknownSuite(JordanConeError, KeyError):
    """The requested property suite does not exist."""

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else "unknown suite"


class InvariantViolation(JordanConeError):
    """A structural verdict and its sampled cross-check disagree."""
