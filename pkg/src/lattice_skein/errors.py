"""Exception hierarchy shared by every module."""

from __future__ import annotations


class SkeinError(Exception):
    """Base class for all library errors."""


class ValidationError(SkeinError, ValueError):
    """Input does not describe a valid object."""


class NotAMatching(ValidationError):
    pass


class Crossing(ValidationError):
    def __init__(self, arc1, arc2):
        super().__init__(f"arcs {arc1} and {arc2} interleave")
        self.arcs = (arc1, arc2)


class InterfaceMismatch(ValidationError):
    pass


class PreconditionFailed(ValidationError):
    pass


class FloorReturnPresent(ValidationError):
    pass


class NotRealizable(ValidationError):
    pass


class EmptyFiber(ValidationError):
    pass


class NotALeaf(ValidationError):
    pass


class ShapeMismatch(ValidationError):
    pass


class NoCrossSection(ValidationError):
    pass


class BudgetExceeded(SkeinError):
    def __init__(self, what: str, size: int, budget: int):
        super().__init__(f"{what}: {size} states exceeds budget {budget}")
        self.size = size
        self.budget = budget


class ArithmeticBug(SkeinError, ArithmeticError):
    """An exact division left a remainder where none is possible."""
