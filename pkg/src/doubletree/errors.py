"""Exception types shared across the package."""

from __future__ import annotations


class DoubletreeError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(DoubletreeError):
    """Malformed input file; carries the 1-based line number when known."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class NotConnectedError(DoubletreeError):
    """Operation requires a connected graph."""


class NotPartialDoubleTreeError(DoubletreeError):
    """Input graph is not embeddable into a product of two trees.

    Carries the recognition witness explaining why.
    """

    def __init__(self, witness):
        super().__init__(f"not a partial double tree: {witness}")
        self.witness = witness


class PointOutsideError(DoubletreeError):
    """Query point lies outside the polygon."""

    def __init__(self, point):
        super().__init__(f"point {point} lies outside the polygon")
        self.point = point


class TooLargeError(DoubletreeError):
    """Input exceeds the size guard of a brute-force reference routine."""


class NotConvexError(DoubletreeError):
    """Vertex set is not convex in the host graph."""


class NotMedianError(DoubletreeError):
    """Graph is not a median graph."""


class WeightMismatchError(DoubletreeError):
    """Edges forced to equal length carry different lengths."""


class InternalDefectError(DoubletreeError):
    """An invariant that recognition guarantees was violated downstream.

    This always indicates a bug, never bad user input; it is raised loudly
    instead of being mapped to a result value.
    """


class OddClassCycleError(InternalDefectError):
    """Edge-class graph of an accepted instance was not 2-colorable."""


class NotATreeError(InternalDefectError):
    """A contracted factor of an accepted instance was not a tree."""
