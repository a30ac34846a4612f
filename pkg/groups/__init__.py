"""Words, presentations and finite balls in Cayley graphs.

Public surface::

    from groups import MarkedAlphabet, Word, Presentation, cayley_ball
"""

from __future__ import annotations

from .balls import BallDistance, BallGraph, ball_distance, cayley_ball
from .exceptions import (
    AtlasError,
    BudgetExceededError,
    DegenerateSeriesError,
    ExactnessError,
    InconsistentMetricError,
    InvariantBreachError,
    MalformedInputError,
    NotFoundError,
    NumericalError,
    PreconditionError,
    PresentationRejectedError,
)
from .presentations import (
    Presentation,
    dehn_reduce,
    free_presentation,
    is_trivial,
    load_presentation,
    parse_presentation,
    surface_presentation,
    validate_small_cancellation,
)
from .words import (
    MarkedAlphabet,
    Word,
    cyclic_reduce,
    enumerate_reduced_words,
    format_word,
    free_reduce,
    parse_word,
)

__all__ = [
    "AtlasError",
    "BallDistance",
    "BallGraph",
    "BudgetExceededError",
    "DegenerateSeriesError",
    "ExactnessError",
    "InconsistentMetricError",
    "InvariantBreachError",
    "MalformedInputError",
    "MarkedAlphabet",
    "NotFoundError",
    "NumericalError",
    "PreconditionError",
    "Presentation",
    "PresentationRejectedError",
    "Word",
    "ball_distance",
    "cayley_ball",
    "cyclic_reduce",
    "dehn_reduce",
    "enumerate_reduced_words",
    "format_word",
    "free_presentation",
    "free_reduce",
    "is_trivial",
    "load_presentation",
    "parse_presentation",
    "parse_word",
    "surface_presentation",
    "validate_small_cancellation",
]
