"""Exception types raised across the package.

The CLI maps these onto exit codes, so every refusal the library can make
has a dedicated class here.
"""

from __future__ import annotations


class LPCodesError(Exception):
    """Base class for all package errors."""


class DimensionError(LPCodesError, ValueError):
    """Operand shapes or lengths do not fit together."""


class GroupMismatchError(LPCodesError, ValueError):
    """Operands live in different group algebras or fields."""


class DomainError(LPCodesError, ValueError):
    """An argument lies outside the domain of the operation."""


class UnsupportedError(LPCodesError, NotImplementedError):
    """A well-defined case that is deliberately not implemented."""


class OrthogonalityError(LPCodesError, ValueError):
    """HX * HZ^T != 0 for a proposed CSS pair."""

    def __init__(self, x_row: int, z_row: int):
        super().__init__(f"HX row {x_row} is not orthogonal to HZ row {z_row}")
        self.x_row = x_row
        self.z_row = z_row


class BudgetExceededError(LPCodesError):
    """An exhaustive search would exceed its configured budget."""

    def __init__(self, message: str, required: int | float):
        super().__init__(message)
        self.required = required


class SearchExhaustedError(LPCodesError):
    """A randomized search ran out of attempts without meeting its target."""

    def __init__(self, message: str, best: object = None):
        super().__init__(message)
        self.best = best


class ChainComplexError(LPCodesError, ValueError):
    """Boundary maps do not compose to zero or have inconsistent shapes."""


class ClassificationError(LPCodesError, ValueError):
    """A vector handed to the codeword classifier is not a non-degenerate codeword."""


class ParseError(LPCodesError, ValueError):
    """Malformed input text; carries the 1-based line and column."""

    def __init__(self, message: str, line: int = 0, column: int = 0, token: str | None = None):
        where = f"line {line}, column {column}: " if line else ""
        super().__init__(where + message)
        self.line = line
        self.column = column
        self.token = token
