"""
Exception hierarchy for the CRPD estimation library.

Every error carries a human readable ``detail`` and the process ``exit_code``
the command line front end reports for it (1 usage, 2 data, 3 numerical).
"""

from typing import Optional


class CRPDError(Exception):
    """Base class for all library errors"""

    exit_code: int = 1

    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail

    def one_line(self) -> str:
        """Machine-parsable single-line rendering: ``<ClassName>: <detail>``"""
        text = " ".join(str(self.detail).split())
        return f"{type(self).__name__}: {text}"


# Usage errors (exit status 1)

class UsageError(CRPDError):
    exit_code = 1


class ConfigError(UsageError):
    pass


class BadFoldCount(UsageError):
    pass


class NotApplicable(UsageError):
    pass


# Data errors (exit status 2)

class DataError(CRPDError):
    exit_code = 2


class ParseError(DataError):
    def __init__(self, detail: str, line: Optional[int] = None, column: Optional[int] = None):
        location = []
        if line is not None:
            location.append(f"line {line}")
        if column is not None:
            location.append(f"column {column}")
        if location:
            detail = f"{', '.join(location)}: {detail}"
        super().__init__(detail)
        self.line = line
        self.column = column


class NonNumericCell(ParseError):
    pass


class EmptyFile(DataError):
    pass


class MissingColumn(DataError):
    pass


class DimensionMismatch(DataError):
    pass


class NonPositiveWeight(DataError):
    pass


class InfeasibleIndex(DataError):
    """The implied-weight base fell below the positivity floor at observation ``index``"""

    def __init__(self, index: int, value: float):
        super().__init__(f"index argument s[{index}] = {value:.6g} is below the positivity floor")
        self.index = index
        self.value = value


class ElBranchDegenerate(DataError):
    pass


class FixtureMismatch(DataError):
    pass


# Numerical errors (exit status 3)

class NumericalError(CRPDError):
    exit_code = 3


class InnerSolverError(NumericalError):
    """Failure of the multiplier solve at one parameter value"""


class SingularJacobian(InnerSolverError):
    pass


class NoDescent(InnerSolverError):
    pass


class MaxIterations(InnerSolverError):
    pass


class InfeasibleProblem(InnerSolverError):
    pass


class SingularOmega(NumericalError):
    pass


class RankDeficient(NumericalError):
    pass


class AllInfeasible(NumericalError):
    pass


class AllInfinite(NumericalError):
    pass


class AllGammaFailed(NumericalError):
    pass
