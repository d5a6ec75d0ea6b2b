"""Exception hierarchy.

Every validation failure derives from :class:`ValidationError` so callers
(and the CLI) can map it to a single exit code.
"""


class QentError(Exception):
    """Base class for all package errors."""


class ValidationError(QentError, ValueError):
    """An input violates a documented invariant."""


class NonSquare(ValidationError):
    pass


class NonHermitian(ValidationError):
    pass


# states use the "Not..." spelling alongside NotPSD / TraceNotOne
NotHermitian = NonHermitian


class NotPSD(ValidationError):
    pass


class TraceNotOne(ValidationError):
    pass


class NonFinite(ValidationError):
    pass


class DimensionMismatch(ValidationError):
    pass


class NotNormalized(ValidationError):
    pass


class BadRank(ValidationError):
    pass


class BadWeights(ValidationError):
    pass


class NotOrthogonal(ValidationError):
    pass


class IncompleteKraus(ValidationError):
    pass


class ShapeMismatch(ValidationError):
    pass


class UnknownChannel(ValidationError):
    pass


class BadParam(ValidationError):
    pass


class InconsistentResult(QentError):
    """Two independent evaluation routes disagree beyond tolerance."""


class OrderingViolated(QentError):
    """I_q >= I_d >= I_o failed; points at an optimizer or implementation bug."""
