"""Exception types shared across the package."""


class QTradeError(Exception):
    """Base class for all library errors."""


class ZeroInversion(QTradeError, ZeroDivisionError):
    pass


class FieldError(QTradeError, ValueError):
    pass


class AmbientMismatch(QTradeError, ValueError):
    pass


class DimensionMismatch(QTradeError, ValueError):
    pass


class OutOfRange(QTradeError, ValueError):
    pass


class InadmissibleParams(QTradeError, ValueError):
    pass


class ParamsMismatch(QTradeError, ValueError):
    pass


class NotATotalTradeSet(QTradeError, ValueError):
    pass


class EmptyReferenceSet(QTradeError, ValueError):
    pass


class DegenerateShellStructure(QTradeError, ArithmeticError):
    pass


class ScaleGuardExceeded(QTradeError, RuntimeError):
    pass
