"""Domain exceptions.

Every exception is a ValueError so generic bad-input handling keeps working.
Diagnostic attributes (row, column, letter, line) are 1-based.
"""
from typing import Optional


class InvalidWordError(ValueError):
    pass


class NotProlongableError(ValueError):
    pass


class LengthOverflowError(ValueError, OverflowError):
    pass


class UnsupportedTilingError(ValueError):
    pass


class OffsetOutOfRangeError(ValueError):
    pass


class LatinSquareError(ValueError):
    def __init__(
        self,
        message: str,
        row: Optional[int] = None,
        column: Optional[int] = None,
        letter: Optional[int] = None,
    ) -> None:
        super().__init__(message)
        self.row = row
        self.column = column
        self.letter = letter


class ShapeMismatchError(LatinSquareError):
    pass


class LetterOutOfRangeError(LatinSquareError):
    pass


class RowDuplicateError(LatinSquareError):
    pass


class ColumnDuplicateError(LatinSquareError):
    pass


class NotNaturalError(LatinSquareError):
    pass


class SquareFormatError(ValueError):
    def __init__(self, message: str, line: int, column: Optional[int] = None) -> None:
        where = f"line {line}" if column is None else f"line {line}, column {column}"
        super().__init__(f"{where}: {message}")
        self.line = line
        self.column = column
