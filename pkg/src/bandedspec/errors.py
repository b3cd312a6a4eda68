"""Exception hierarchy.

Two families: ``ValidationError`` for inputs that fail a structural or
class-membership check, and ``NumericalError`` for computations that cannot
be carried out reliably in floating point.  The CLI maps them to exit codes
1 and 2 respectively.
"""


class BandedSpecError(Exception):
    pass


class ValidationError(BandedSpecError, ValueError):
    pass


class NumericalError(BandedSpecError, ArithmeticError):
    pass


class NotHermitian(ValidationError):
    pass


class DimensionMismatch(ValidationError):
    pass


class NotPSD(ValidationError):
    pass


class BandStructureError(ValidationError):
    """Raised by ``validate_banded``; ``violations`` lists every failed check."""

    def __init__(self, message, violations=()):
        super().__init__(message)
        self.violations = list(violations)


class BandViolation(BandStructureError):
    pass


class PivotViolation(BandStructureError):
    pass


class RankViolation(BandStructureError):
    pass


class NotInClass(ValidationError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class ParseError(ValidationError):
    pass


class SchemaError(ValidationError):
    pass


class RankDeficient(NumericalError):
    pass


class NotPositiveDefinite(NumericalError):
    pass


class SingularTotalMass(NumericalError):
    pass


class NotDefinite(NumericalError):
    pass


class RankMismatch(NumericalError):
    pass


class ConditioningError(NumericalError):
    pass


class SingularNormalizer(NumericalError):
    pass


class StepSizeTooLarge(NumericalError):
    pass


class RankZeroStart(NumericalError):
    pass


class Incomparable(NumericalError):
    pass
