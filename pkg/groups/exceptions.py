"""Domain errors.

Every error carries the process ``exit_code`` the CLI returns for it: 2 for malformed input and
failed preconditions or gates, 3 for exhausted budgets, 4 for a broken internal invariant.
"""

from __future__ import annotations


class AtlasError(Exception):
    """Base class for every error raised by the library."""

    exit_code = 4


class MalformedInputError(AtlasError, ValueError):
    """
    Raised when a word, presentation or subgroup file cannot be parsed, or a letter is not
    in the alphabet. ``line`` / ``column`` are 1-based and ``None`` when not applicable.
    """

    exit_code = 2

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(f"{where}{message}")
        self.line = line
        self.column = column


class PresentationRejectedError(AtlasError):
    """Raised when a presentation fails the C'(1/6) gate. ``piece`` is the offending piece."""

    exit_code = 2

    def __init__(self, message: str, piece=None, ratio=None):
        super().__init__(message)
        self.piece = piece
        self.ratio = ratio


class PreconditionError(AtlasError):
    """Raised when an operation's hypothesis does not hold (finite index, empty word, ...)."""

    exit_code = 2


class ExactnessError(PreconditionError):
    """Raised when a request reaches past the part of a ball where answers are exact."""


class InconsistentMetricError(PreconditionError):
    """Raised when three distances violate the triangle inequality."""


class DegenerateSeriesError(PreconditionError):
    """Raised when a return series carries no usable (nonzero even) terms."""


class BudgetExceededError(AtlasError):
    """
    Raised when a construction hits its vertex budget. ``completed_radius`` is the largest
    radius that was fully built before the cap was reached (-1 if none).
    """

    exit_code = 3

    def __init__(self, message: str, completed_radius: int = -1, budget: int | None = None):
        super().__init__(message)
        self.completed_radius = completed_radius
        self.budget = budget


class NotFoundError(AtlasError):
    """Raised when a bounded search ends without a result. Never a proof of nonexistence."""

    exit_code = 3


class NumericalError(AtlasError):
    """Raised when an iterative method fails to converge; ``residual`` is the last gap."""

    exit_code = 3

    def __init__(self, message: str, residual: float | None = None):
        super().__init__(message)
        self.residual = residual


class InvariantBreachError(AtlasError):
    """Raised when two independent computations that must agree do not (a correctness bug)."""

    exit_code = 4
