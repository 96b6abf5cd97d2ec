"""
Exception hierarchy for the BLDL toolkit
"""
from typing import Optional
from config.constants import ErrorType, ERROR_MESSAGES, INPUT_ERRORS


class BLDLError(Exception):
    """Base error carrying an ErrorType and structured context"""

    error_type: ErrorType = ErrorType.INVALID_CONFIG

    def __init__(self, message: Optional[str] = None, **context):
        self.context = context
        super().__init__(message or ERROR_MESSAGES[self.error_type])

    @property
    def is_input_error(self) -> bool:
        return self.error_type in INPUT_ERRORS

    def with_context(self, **extra) -> "BLDLError":
        """Attach extra context (fold, variant, ...) and return self"""
        self.context.update(extra)
        return self


class NegativeEntry(BLDLError):
    error_type = ErrorType.NEGATIVE_ENTRY

    def __init__(self, row: int, col: int, value: float):
        super().__init__(
            f"Negative entry {value:.3e} at (row={row}, col={col})",
            row=row, col=col, value=value
        )
        self.row = row
        self.col = col


class ColumnSumViolation(BLDLError):
    error_type = ErrorType.COLUMN_SUM_VIOLATION

    def __init__(self, col: int, total: float):
        super().__init__(f"Column {col} sums to {total!r}", col=col, sum=total)
        self.col = col
        self.total = total


class InvalidDistribution(BLDLError):
    error_type = ErrorType.INVALID_DISTRIBUTION

    def __init__(self, message: Optional[str] = None, *, column: Optional[int] = None,
                 row: Optional[int] = None):
        super().__init__(message, column=column, row=row)
        self.column = column
        self.row = row


class ShapeMismatch(BLDLError):
    error_type = ErrorType.SHAPE_MISMATCH


class ParseError(BLDLError):
    error_type = ErrorType.PARSE_ERROR

    def __init__(self, path: str, line: int, detail: str = ""):
        super().__init__(f"{path}:{line}: {detail}".rstrip(": "), path=path, line=line)
        self.line = line


class RowCountMismatch(BLDLError):
    error_type = ErrorType.ROW_COUNT_MISMATCH


class InvalidRank(BLDLError):
    error_type = ErrorType.INVALID_RANK


class InvalidConfig(BLDLError):
    error_type = ErrorType.INVALID_CONFIG


class AllZeroDifferences(BLDLError):
    error_type = ErrorType.ALL_ZERO_DIFFERENCES


class SingularSystem(BLDLError):
    error_type = ErrorType.SINGULAR_SYSTEM

    def __init__(self, which: str, condition: float):
        super().__init__(
            f"{which}: normal matrix is singular (condition estimate {condition:.3e})",
            which=which, condition=condition
        )
        self.condition = condition


class NonFinite(BLDLError):
    error_type = ErrorType.NON_FINITE

    def __init__(self, what: str, iteration: Optional[int] = None):
        super().__init__(
            f"{what} is not finite" + (f" at iteration {iteration}" if iteration is not None else ""),
            what=what, iter=iteration
        )
        self.iteration = iteration
