"""Exception types raised across the package.

Each subclass maps to one CLI exit code through ``exit_code``.
"""

from __future__ import annotations


class BoxPersError(Exception):
    exit_code = 1

    def __init__(self, message: str = "", payload: dict | None = None):
        super().__init__(message or self.__class__.__name__)
        self.payload = payload or {}


class ValidationError(BoxPersError):
    """Bad input: schema, domain or precondition violations."""

    exit_code = 2


class PropertyFailure(BoxPersError):
    """A checked mathematical property did not hold."""

    exit_code = 1


# fieldlin
class AmbientMismatch(ValidationError):
    pass


class NotASubspace(ValidationError):
    pass


class NotInvariant(PropertyFailure):
    pass


# diagcalc
class DomainMismatch(ValidationError):
    pass


class CodomainMismatch(ValidationError):
    pass


class NonCommuting(ValidationError):
    pass


class LadderNotCommuting(ValidationError):
    pass


class ColumnsNotExact(ValidationError):
    pass


class NotAFactorization(ValidationError):
    pass


class NotComposable(ValidationError):
    pass


class NotSurjective(ValidationError):
    pass


class NotStabilized(BoxPersError):
    exit_code = 3


# covercomplex
class NotACocycle(ValidationError):
    pass


class PeriodRankTooHigh(ValidationError):
    pass


class EmptyComplex(ValidationError):
    pass


class WindowTooSmall(ValidationError):
    pass


class OutOfSafeRange(ValidationError):
    pass


class SchemaError(ValidationError):
    pass


# config
class InternalMismatch(PropertyFailure):
    pass


class CardinalityMismatch(PropertyFailure):
    pass


class SplitFailed(PropertyFailure):
    pass


# harness
class NotAManifold(ValidationError):
    pass


class ClassMismatch(ValidationError):
    pass


class EpsilonTooLarge(ValidationError):
    pass


class OracleMismatch(PropertyFailure):
    pass


class Mismatch(PropertyFailure):
    pass
