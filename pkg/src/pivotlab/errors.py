"""Exception hierarchy.

Class names double as the machine-readable error names reported by the CLI.
"""


class PivotLabError(Exception):
    """Base class for every domain error raised by pivotlab."""

    @property
    def name(self) -> str:
        return type(self).__name__


class NotPrimePower(PivotLabError, ValueError):
    pass


class UnsupportedOrder(PivotLabError, ValueError):
    pass


class DivisionByZero(PivotLabError, ZeroDivisionError):
    pass


class UnknownLabel(PivotLabError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class GroundMismatch(PivotLabError, ValueError):
    pass


class KindViolation(PivotLabError, ValueError):
    pass


class KindMismatch(PivotLabError, ValueError):
    pass


class SingularPivotBlock(PivotLabError, ValueError):
    pass


class GroundSetTooLarge(PivotLabError, ValueError):
    pass


class GapTooLarge(GroundSetTooLarge):
    pass


class NotIsotropic(PivotLabError, ValueError):
    pass


class NotIsotropicDirection(PivotLabError, ValueError):
    pass


class NotEulerian(PivotLabError, ValueError):
    pass


class NotSupplementary(PivotLabError, ValueError):
    pass


class InvalidRepresentation(PivotLabError, ValueError):
    pass


class MalformedTree(PivotLabError, ValueError):
    pass


class ExhaustionFailure(PivotLabError, RuntimeError):
    """A search that a theorem guarantees to succeed came up empty."""


class InternalConsistencyFailure(PivotLabError, RuntimeError):
    """Two routes that must agree did not."""


class PreconditionFailed(PivotLabError, ValueError):
    pass


class CorankDrop(PivotLabError, ValueError):
    pass


class BadBoundary(PivotLabError, ValueError):
    pass


class InconsistentConnectionType(PivotLabError, ValueError):
    pass


class EmptyFamily(PivotLabError, ValueError):
    pass


class EmptyAfterDeletion(PivotLabError, ValueError):
    pass


class NotADeltaMatroid(PivotLabError, ValueError):
    pass


class NotAMatroid(PivotLabError, ValueError):
    pass


class ParseError(PivotLabError, ValueError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class CapExceeded(PivotLabError, ValueError):
    pass
