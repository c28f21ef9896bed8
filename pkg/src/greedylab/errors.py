"""
Error hierarchy for greedylab.

Every domain error is a ValueError so that callers written against plain
ValueError keep working; minimizer failures are RuntimeErrors.
"""

from typing import Optional


class GreedyLabError(ValueError):
    """Base class for invalid inputs and unsatisfiable requests."""


class ParameterError(GreedyLabError):
    """A numeric parameter is outside its admissible range."""


class SpaceParseError(GreedyLabError):
    """A space, weight or vector literal does not follow the grammar."""

    def __init__(self, message: str, text: str, position: int):
        self.text = text
        self.position = position
        super().__init__(f"{message} at position {position}: {text!r}")


class BudgetExceededError(GreedyLabError):
    """A combinatorial enumeration would exceed its configured cap."""


class UnsupportedError(GreedyLabError):
    """The requested quantity is not computable for this model or space."""


class CollisionError(GreedyLabError):
    """Auxiliary indices overlap the support of the vector under study."""


class NotGreedySetError(GreedyLabError):
    """An index set fails the greedy-set magnitude test."""

    def __init__(self, indices: object, reason: Optional[str] = None):
        self.indices = indices
        detail = f": {reason}" if reason else ""
        super().__init__(f"{indices} is not a greedy set{detail}")


class ConvergenceError(RuntimeError):
    """A numerical minimizer failed to converge."""
