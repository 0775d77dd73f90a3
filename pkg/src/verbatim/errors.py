"""Exception hierarchy shared by every module."""


class VerbatimError(Exception):
    """Base class for all library errors."""


class ParseError(VerbatimError):
    pass


class OutOfRangeError(VerbatimError):
    """A finite-representation language was queried beyond its degree bound."""


class AmbiguousGraphError(VerbatimError):
    """A graph-defined language produced a walk count of 2 or more."""

    def __init__(self, word, count):
        super().__init__(f"ambiguous graph language: walk count {count} for word {word}")
        self.word = word
        self.count = count


class NotPythagoreanError(VerbatimError):
    def __init__(self, report):
        super().__init__(f"language is not Pythagorean: {report.describe()}")
        self.report = report


class DimensionError(VerbatimError):
    pass


class SymmetryError(VerbatimError):
    pass


class SingularMatrixError(VerbatimError):
    def __init__(self, cond):
        super().__init__(f"matrix is singular or ill-conditioned (condition estimate {cond:.3e})")
        self.cond = cond


class ParameterError(VerbatimError):
    pass


class PreconditionError(VerbatimError):
    """An operation refused its input because a documented precondition failed."""

    def __init__(self, message, measured=None):
        super().__init__(message)
        self.measured = measured
