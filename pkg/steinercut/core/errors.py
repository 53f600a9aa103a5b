"""Exception hierarchy shared by the solver modules."""
from typing import Optional


class SteinerCutError(Exception):
    """Base class for every error raised by steinercut."""


class InvalidArgumentError(SteinerCutError, ValueError):
    """Bad input or violated precondition."""


class CapacityError(SteinerCutError):
    """Brute-force enumeration refused because the graph is above the vertex cap."""

    def __init__(self, vertex_count: int, cap: int):
        super().__init__(f"graph has {vertex_count} vertices, brute-force cap is {cap}")
        self.vertex_count = vertex_count
        self.cap = cap


class ParseError(SteinerCutError):
    """Malformed graph file."""

    def __init__(self, message: str, line_number: Optional[int] = None):
        prefix = f"line {line_number}: " if line_number is not None else ""
        super().__init__(f"{prefix}{message}")
        self.line_number = line_number


class InvariantViolation(SteinerCutError, AssertionError):
    """An internal guarantee did not hold. Indicates a bug or mis-tuned constants."""


class RoundLimitExceeded(InvariantViolation):
    """The cut-matching game ran past its round limit."""


class RecursionDepthExceeded(InvariantViolation):
    """Terminal decomposition recursed deeper than the balance guarantee allows."""


class SparsificationError(InvariantViolation):
    """Sparsified terminal set is larger than half of its input."""

    def __init__(self, selected: int, original: int):
        super().__init__(f"sparsified set has {selected} terminals, more than half of {original}")
        self.selected = selected
        self.original = original
