"""Exception hierarchy for maskit2."""

from __future__ import annotations

from typing import Any


class Maskit2Error(Exception):
    """Base class for numeric and construction failures."""


# hyperbolic


class InvalidPoint(Maskit2Error, ValueError):
    """A point is off the hyperboloid or two points are inconsistent."""


class NotHyperbolic(Maskit2Error, ValueError):
    """An isometry is elliptic, parabolic or too close to the trace-2 band."""


class DegenerateIncidence(Maskit2Error):
    """Segments overlap, touch at an endpoint of one another, or meet a cone point."""


# orbifold


class InvalidParams(Maskit2Error, ValueError):
    """Pants-and-fold parameters outside the admissible region."""


class InvalidNecklace(Maskit2Error):
    """The vertex hexagon of a marking is not embedded or not oriented."""


class ConstructionFailure(Maskit2Error):
    """A certificate orbifold solve did not converge."""


class ParseError(Maskit2Error, ValueError):
    """Malformed orbifold document."""

    def __init__(self, message: str, line: int = 0):
        super().__init__(f"line {line}: {message}" if line else message)
        self.line = line


# tessellation


class TessellationError(Maskit2Error):
    """Algebraic and geometric adjacency disagree."""


class DepthExceeded(Maskit2Error):
    """A tile walk exceeded its tile budget."""


class InvalidQuery(Maskit2Error, ValueError):
    """An enumeration query names the same cone point twice."""


# maskit


class DomainCheckError(Maskit2Error):
    """A Theorem-1 label could not be realized by a verified geodesic."""


class BudgetExceeded(Maskit2Error):
    """Competitor enumeration ran out of budget; carries the partial report."""

    def __init__(self, message: str, partial: Any = None):
        super().__init__(message)
        self.partial = partial


class CompletionError(Maskit2Error):
    """A 4-chain did not extend to exactly one necklace at the search bound."""


class ReductionFailure(Maskit2Error):
    """Reduction did not reach the domain; carries the best marking found."""

    def __init__(self, message: str, best: Any = None):
        super().__init__(message)
        self.best = best


# verify


class InvalidBracelet(Maskit2Error):
    """The canonical length-4 bracelet fails its hypotheses."""
