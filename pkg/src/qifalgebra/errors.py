"""Exception hierarchy shared by every module of the package."""


class QIFError(ValueError):
    """Base class for all domain errors raised by qifalgebra."""


class RowSumError(QIFError):
    pass


class NegativeEntry(QIFError):
    pass


class DuplicateLabel(QIFError):
    pass


class DimensionMismatch(QIFError):
    pass


class LabelMismatch(QIFError):
    pass


class IncompatibleInputs(QIFError):
    pass


class BadProbability(QIFError):
    pass


class TypeMismatch(QIFError):
    pass


class ZeroPriorVulnerability(QIFError):
    """Multiplicative leakage is undefined because V_g[pi] is zero.

    The additive leakage is still meaningful and travels on the exception
    as ``report``.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class SolverStall(QIFError):
    pass


class InvalidModel(QIFError):
    pass


class IndexOutOfRange(QIFError):
    pass


class ChannelTooLarge(QIFError):
    pass
