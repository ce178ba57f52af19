"""Exception hierarchy shared by every module of the package."""


class KundtError(Exception):
    """Base class for all errors raised by this package."""


class ExprSyntaxError(KundtError, SyntaxError):
    """Raised by the expression parser, with the offending character offset."""

    def __init__(self, message, position, expected):
        self.position = position
        self.expected = expected
        super().__init__(f"{message} at position {position} (expected {expected})")


class EvalError(KundtError, ArithmeticError):
    """Numeric evaluation hit a pole or left the real domain of a function."""


class DomainError(KundtError):
    pass


class SamplingExhausted(KundtError):
    """The randomized zero test could not find enough regular sample points."""


class SingularMetric(KundtError):
    pass


class ChartMismatch(KundtError):
    pass


class InvalidMetric(KundtError):
    pass


class NotLightlike(KundtError):
    pass


class DegenerateAtBasePoint(KundtError):
    pass


class RequiresIntegrability(KundtError):
    pass


class TotallyGeodesicMismatch(KundtError):
    """The Lie-derivative and parallel-line totally geodesic tests disagreed."""


class NotAdapted(KundtError):
    def __init__(self, reasons):
        self.reasons = list(reasons)
        super().__init__("metric is not in adapted Kundt form: " + "; ".join(self.reasons))


class NotTotallyGeodesic(KundtError):
    pass


class FrameDegenerate(KundtError):
    pass


class PostVerificationFailed(KundtError):
    pass


class DegenerateMetric(KundtError):
    pass


class NotADerivation(KundtError):
    pass


class UnknownEntry(KundtError):
    pass


class BadParameter(KundtError):
    pass


class MetricFileError(KundtError):
    def __init__(self, message, line=None):
        self.line = line
        where = f"line {line}: " if line is not None else ""
        super().__init__(where + message)
