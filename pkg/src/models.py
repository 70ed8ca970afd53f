"""Data models for maskit2."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property

from .errors import InvalidNecklace, InvalidParams
from .hyperbolic import (
    Isometry,
    Point,
    Segment,
    coincide,
    distance,
    fixed_point,
    segments_cross,
)

PRODUCT_TOL = 1e-8


class Side(str, Enum):
    """Component of the orbifold minus the necklace."""

    H = "H"
    HBAR = "Hbar"

    @property
    def opposite(self) -> Side:
        return Side.HBAR if self is Side.H else Side.H


def cyclic(i: int) -> int:
    """Reduce a cone or necklace index into 1..6."""
    return (i - 1) % 6 + 1


@dataclass(frozen=True)
class PantsFoldParams:
    """Pants-and-fold coordinates of a marked orbifold."""

    a1: float
    a3: float
    a5: float
    t1: float = 0.0
    t3: float = 0.0
    t5: float = 0.0

    def __post_init__(self):
        for name in ("a1", "a3", "a5", "t1", "t3", "t5"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise InvalidParams(f"{name} must be finite, got {value}")
        for name in ("a1", "a3", "a5"):
            if getattr(self, name) <= 0:
                raise InvalidParams(f"{name} must be positive")

    @property
    def lengths(self) -> tuple[float, float, float]:
        return (self.a1, self.a3, self.a5)

    @property
    def twists(self) -> tuple[float, float, float]:
        return (self.t1, self.t3, self.t5)

    def as_tuple(self) -> tuple[float, ...]:
        return (self.a1, self.a3, self.a5, self.t1, self.t3, self.t5)


@dataclass(frozen=True, eq=False)
class Holonomy:
    """Six half-turns R_1..R_6 with cone-point lifts w_1..w_6.

    The relation R_1···R_6 = ±I holds and w_1..w_6 bound an embedded
    hexagon, the lift of H.
    """

    R: tuple[Isometry, ...]
    w: tuple[Point, ...]
    orientation: int = 1

    def __post_init__(self):
        if len(self.R) != 6 or len(self.w) != 6:
            raise InvalidNecklace("A marking needs six half-turns and six lifts")
        if self.orientation not in (1, -1):
            raise ValueError("orientation must be +1 or -1")
        for i, (r, p) in enumerate(zip(self.R, self.w), start=1):
            if abs(r.trace) > 1e-7 * max(1.0, float(abs(r.m).max())):
                raise InvalidNecklace(f"R_{i} is not a half-turn (trace {r.trace})")
            if not coincide(r.apply(p), p, 1e-6):
                raise InvalidNecklace(f"R_{i} does not fix w_{i}")
        if not self.prefix[6].is_identity(PRODUCT_TOL):
            raise InvalidNecklace("R_1···R_6 is not the identity")
        self._validate_hexagon(self.w, self.orientation, "H")

    @staticmethod
    def _validate_hexagon(vertices, orientation: int, name: str) -> None:
        sides = [Segment(vertices[i], vertices[(i + 1) % 6]) for i in range(6)]
        for i in range(6):
            for j in range(i + 2, 6):
                if i == 0 and j == 5:
                    continue
                if segments_cross(sides[i], sides[j]):
                    raise InvalidNecklace(f"{name} sides {i + 1} and {j + 1} cross")
        if _signed_area(vertices) * orientation <= 0:
            raise InvalidNecklace(f"{name} vertex cycle has the wrong orientation")

    @classmethod
    def from_matrices(cls, matrices) -> Holonomy:
        """Marking read from six half-turn matrices; lifts are their fixed points."""
        rs = tuple(m if isinstance(m, Isometry) else Isometry(m) for m in matrices)
        if len(rs) != 6:
            raise InvalidNecklace(f"Expected six matrices, got {len(rs)}")
        return cls(rs, tuple(fixed_point(r) for r in rs), 1)

    def r(self, i: int) -> Isometry:
        return self.R[cyclic(i) - 1]

    def cone(self, i: int) -> Point:
        return self.w[cyclic(i) - 1]

    @cached_property
    def prefix(self) -> tuple[Isometry, ...]:
        """prefix[k] = R_1···R_k, prefix[0] = I."""
        out = [Isometry.identity()]
        for r in self.R:
            out.append(out[-1] @ r)
        return tuple(out)

    @cached_property
    def prefix_inverse(self) -> tuple[Isometry, ...]:
        return tuple(p.inverse() for p in self.prefix)

    @cached_property
    def hbar_lifts(self) -> tuple[Point, ...]:
        """w̄_k = (R_1···R_{k-1})·w_k, the vertices of the base H̄ tile."""
        return tuple(self.prefix[k].apply(self.w[k]) for k in range(6))

    def necklace_lengths(self) -> tuple[float, ...]:
        return tuple(distance(self.w[i], self.w[(i + 1) % 6]) for i in range(6))


def _signed_area(vertices) -> float:
    pts = [v.klein() for v in vertices]
    total = 0.0
    for (x1, y1), (x2, y2) in zip(pts, pts[1:] + pts[:1]):
        total += x1 * y2 - x2 * y1
    return total / 2.0


_LABEL_RE = re.compile(r"^([bB])([1-6])([1-6])(?:\^([1-6]+))?$")


@dataclass(frozen=True, order=True)
class ArcLabel:
    """Arc symbol: endpoints j < k, start side, necklace crossing sequence."""

    j: int
    k: int
    start_side: Side = Side.H
    crossings: tuple[int, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "start_side", Side(self.start_side))
        object.__setattr__(self, "crossings", tuple(self.crossings))
        if not (1 <= self.j <= 6 and 1 <= self.k <= 6):
            raise ValueError(f"Cone indices out of range: {self.j}, {self.k}")
        if self.j >= self.k:
            raise ValueError(f"Arc label needs j < k, got {self.j}, {self.k}")
        for a, b in zip(self.crossings, self.crossings[1:]):
            if a == b:
                raise ValueError(f"Repeated consecutive crossing {a} is not taut")
        if any(not 1 <= c <= 6 for c in self.crossings):
            raise ValueError(f"Crossing indices out of range: {self.crossings}")

    @classmethod
    def necklace(cls, i: int) -> ArcLabel:
        """Label of γ_i."""
        i = cyclic(i)
        if i == 6:
            return cls(1, 6)
        return cls(i, i + 1)

    @classmethod
    def parse(cls, text: str) -> ArcLabel:
        """Parse ``b13``, ``B34^6`` style labels (``B`` marks the H̄ side)."""
        match = _LABEL_RE.match(text.strip())
        if not match:
            raise ValueError(f"Malformed arc label: {text!r}")
        side = Side.H if match.group(1) == "b" else Side.HBAR
        crossings = tuple(int(c) for c in match.group(4) or "")
        return cls(int(match.group(2)), int(match.group(3)), side, crossings)

    @property
    def necklace_index(self) -> int | None:
        """i when this label names the necklace arc γ_i, else None."""
        if self.crossings:
            return None
        if self.k == self.j + 1:
            return self.j
        if (self.j, self.k) == (1, 6):
            return 6
        return None

    def canonical(self) -> ArcLabel:
        """Resolve β_{i,i+1} and β_{1,6} without crossings to γ_i (side H)."""
        if self.necklace_index is not None and self.start_side is Side.HBAR:
            return ArcLabel(self.j, self.k, Side.H, ())
        return self

    def mirrored(self) -> ArcLabel:
        return ArcLabel(self.j, self.k, self.start_side.opposite, self.crossings).canonical()

    def __str__(self) -> str:
        head = "b" if self.start_side is Side.H else "B"
        tail = "^" + "".join(str(c) for c in self.crossings) if self.crossings else ""
        return f"{head}{self.j}{self.k}{tail}"

    def display(self) -> str:
        """Readable symbol, e.g. β̄_{3,4}^6 or γ_2."""
        if self.necklace_index is not None:
            return f"γ{self.necklace_index}"
        bar = "̄" if self.start_side is Side.HBAR else ""
        tail = "^" + "".join(str(c) for c in self.crossings) if self.crossings else ""
        return f"β{bar}_{{{self.j},{self.k}}}{tail}"


@dataclass(frozen=True, eq=False)
class Tile:
    """A tile of the developed tessellation: word g applied to a base hexagon."""

    g: Isometry
    parity: Side
    vertices: tuple[Point, ...]

    def vertex(self, k: int) -> Point:
        return self.vertices[cyclic(k) - 1]

    def side(self, i: int) -> Segment:
        """Side i joins the vertices labeled i and i+1."""
        return Segment(self.vertex(i), self.vertex(i + 1))


@dataclass(frozen=True, eq=False)
class Piece:
    """Part of an arc inside one tile, pulled back into the base tile."""

    parity: Side
    segment: Segment


@dataclass(frozen=True, eq=False)
class ArcInstance:
    """A labeled arc realized by a geodesic segment between cone-point lifts."""

    label: ArcLabel
    length: float
    start_lift: Point
    endpoint_lift: Point
    verified: bool = True
    simple: bool = True
    converged: bool = True
    start_deck: Isometry = field(default_factory=Isometry.identity)
    end_deck: Isometry = field(default_factory=Isometry.identity)
    pieces: tuple[Piece, ...] = ()
    path: tuple[int, ...] = ()

    def __post_init__(self):
        if self.length <= 0:
            raise ValueError(f"Arc length must be positive, got {self.length}")

    @property
    def endpoints(self) -> frozenset[int]:
        return frozenset((self.label.j, self.label.k))

    @property
    def crossing_count(self) -> int:
        return len(self.label.crossings)

    def other_end(self, cone: int) -> int:
        if cone == self.label.j:
            return self.label.k
        if cone == self.label.k:
            return self.label.j
        raise ValueError(f"ω{cone} is not an endpoint of {self.label}")
