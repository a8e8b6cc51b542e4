"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class ParagrayError(Exception):
    """Base class for every error raised by this package."""


class DimensionMismatch(ParagrayError, ValueError):
    pass


class SingularForm(ParagrayError, ValueError):
    pass


class Inconsistent(ParagrayError, ValueError):
    """A linear system has no solution."""


class NotParaHermitian(ParagrayError, ValueError):
    pass


class UnsupportedDimension(ParagrayError, ValueError):
    pass


class LabelAbsent(ParagrayError, KeyError):
    pass


class DegenerateRestriction(ParagrayError, ArithmeticError):
    """The tensor form restricted to a module is degenerate."""


class SlotSymmetryViolation(ParagrayError, ValueError):
    pass


class JConditionViolation(ParagrayError, ValueError):
    pass


class SingularAtPoint(ParagrayError, ArithmeticError):
    """The metric is not invertible at the requested point."""


class NotAlmostStructure(ParagrayError, ValueError):
    pass


class NonStandardBasis(ParagrayError, ValueError):
    pass


class ImaginaryResidue(ParagrayError, ArithmeticError):
    """A tensor expected to be real carries a nonzero imaginary part."""


class UnknownLabel(ParagrayError, KeyError):
    pass


class ParseError(ParagrayError, ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class NotCurvatureTensor(ParagrayError, ValueError):
    pass
