"""Errors and warnings
===================

Every error raised by the library derives from :class:`QGLSError`.
Precondition failures are also :class:`ValueError`, numerical failures are also
:class:`ArithmeticError`, so callers may catch either family.

Diagnostics that do not stop a computation are emitted with :func:`warnings.warn`
using the categories defined at the end of this module.
"""

from typing import Optional


class QGLSError(Exception):
    """Base class of the library errors."""


class ValidationError(QGLSError, ValueError):
    """An input violates a documented precondition."""


class ConfigurationError(ValidationError):
    pass


class NotHermitian(ValidationError):
    pass


class NegativeEigenvalue(ValidationError):
    pass


class DimensionMismatch(ValidationError):
    pass


class GainNotLoss(ValidationError):
    """A loss element was requested with a transmission singular value above one."""


class LossNotGain(ValidationError):
    """A gain element was requested with a transmission singular value below one."""


class ConstraintViolated(ValidationError):
    """``TT⁺ + σAA⁺ = I`` does not hold."""


class NegativeOccupation(ValidationError):
    pass


class EmptyWindow(ValidationError):
    pass


class BadGrid(ValidationError):
    pass


class SubunityGain(ValidationError):
    pass


class DomainError(ValidationError):
    pass


class AsymmetricSampling(ValidationError):
    pass


class PipelineError(ValidationError):
    """A pipeline document could not be turned into a pipeline."""


class PipelineSyntaxError(PipelineError):
    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        if line is not None:
            message = "{0} (line {1}, column {2})".format(message, line, column)
        super().__init__(message)
        self.line = line
        self.column = column


class PipelineSemanticError(PipelineError):
    def __init__(self, message: str, element: Optional[str] = None):
        if element is not None:
            message = "{0}: {1}".format(element, message)
        super().__init__(message)
        self.element = element


class NumericalError(QGLSError, ArithmeticError):
    """A computation produced a result outside its physical domain."""


class InadmissibleState(NumericalError):
    """A covariance matrix violates the uncertainty principle."""


class TruncationOverflow(NumericalError):
    """A truncated Fock computation lost more probability than allowed."""

    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report


class QGLSWarning(UserWarning):
    pass


class FormulaCaveatWarning(QGLSWarning):
    """A formula known to disagree with the rest of the model was evaluated."""


class TruncationWarning(QGLSWarning):
    pass
