"""Hyperbolic-plane primitives.

Points live on the hyperboloid ``-x0^2 + x1^2 + x2^2 = -1``; isometries are
2x2 matrices of determinant one acting on the symmetric-matrix model
``P = [[x0+x1, x2], [x2, x0-x1]]`` by ``P -> g P g^T``. Orientation and
directions are read in a Klein chart recentred at the point of interest;
crossing tests use signed distances to lines, which need no chart.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import DegenerateIncidence, InvalidPoint, NotHyperbolic

logger = logging.getLogger(__name__)

METRIC_TOL = 1e-9
INCIDENCE_TOL = 1e-10
CLASSIFY_TOL = 1e-9
COINCIDE_TOL = 1e-7
BETWEEN_TOL = 1e-9
RENORMALIZE_AFTER = 8

_J = np.array([[0.0, -1.0], [1.0, 0.0]])


def minkowski(p: np.ndarray, q: np.ndarray) -> float:
    """Minkowski form <p, q> = -p0 q0 + p1 q1 + p2 q2."""
    return float(-p[0] * q[0] + p[1] * q[1] + p[2] * q[2])


@dataclass(frozen=True)
class Point:
    """A point of the hyperbolic plane in hyperboloid coordinates."""

    x0: float
    x1: float
    x2: float

    def __post_init__(self):
        norm = -self.x0 * self.x0 + self.x1 * self.x1 + self.x2 * self.x2
        if self.x0 < 1.0 - METRIC_TOL or abs(norm + 1.0) > METRIC_TOL * max(
            1.0, self.x0 * self.x0
        ):
            raise InvalidPoint(f"Not on the hyperboloid: ({self.x0}, {self.x1}, {self.x2})")

    @classmethod
    def from_vector(cls, v) -> Point:
        """Project a timelike vector onto the hyperboloid."""
        v = np.asarray(v, dtype=float)
        n = -minkowski(v, v)
        if n <= 0:
            raise InvalidPoint(f"Vector {v} is not timelike")
        v = v / math.sqrt(n)
        if v[0] < 0:
            v = -v
        return cls(float(v[0]), float(v[1]), float(v[2]))

    @classmethod
    def from_klein(cls, u: float, v: float) -> Point:
        r2 = u * u + v * v
        if r2 >= 1.0:
            raise InvalidPoint(f"Klein point ({u}, {v}) outside the unit disk")
        x0 = 1.0 / math.sqrt(1.0 - r2)
        return cls(x0, u * x0, v * x0)

    @classmethod
    def from_symmetric(cls, m: np.ndarray) -> Point:
        return cls.from_vector(
            [(m[0, 0] + m[1, 1]) / 2.0, (m[0, 0] - m[1, 1]) / 2.0, (m[0, 1] + m[1, 0]) / 2.0]
        )

    @cached_property
    def vec(self) -> np.ndarray:
        return np.array([self.x0, self.x1, self.x2])

    @cached_property
    def symmetric(self) -> np.ndarray:
        return np.array([[self.x0 + self.x1, self.x2], [self.x2, self.x0 - self.x1]])

    def klein(self) -> tuple[float, float]:
        return (self.x1 / self.x0, self.x2 / self.x0)


def origin() -> Point:
    return Point(1.0, 0.0, 0.0)


@dataclass(frozen=True, eq=False)
class Isometry:
    """Orientation-preserving isometry, a matrix of determinant one up to sign."""

    m: np.ndarray
    factors: int = field(default=1, compare=False)

    def __post_init__(self):
        m = np.array(self.m, dtype=float).reshape(2, 2)
        det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
        if abs(det - 1.0) > 1e-6 * max(1.0, float(np.abs(m).max()) ** 2):
            raise ValueError(f"Isometry matrix has determinant {det}")
        m.setflags(write=False)
        object.__setattr__(self, "m", m)

    @classmethod
    def identity(cls) -> Isometry:
        return cls(np.eye(2))

    @property
    def trace(self) -> float:
        return float(self.m[0, 0] + self.m[1, 1])

    def is_hyperbolic(self, tol: float = CLASSIFY_TOL) -> bool:
        return abs(self.trace) > 2.0 + tol

    def canonical(self) -> Isometry:
        """Renormalize to determinant one with first nonzero entry positive."""
        m = np.array(self.m)
        det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
        m = m / math.sqrt(det)
        for entry in m.flat:
            if abs(entry) > 1e-15:
                if entry < 0:
                    m = -m
                break
        return Isometry(m)

    def compose(self, other: Isometry) -> Isometry:
        """Return self·other (other acts first)."""
        product = Isometry(self.m @ other.m, factors=self.factors + other.factors)
        if product.factors > RENORMALIZE_AFTER:
            return product.canonical()
        return product

    def __matmul__(self, other: Isometry) -> Isometry:
        return self.compose(other)

    def inverse(self) -> Isometry:
        a, b, c, d = self.m.flat
        return Isometry(np.array([[d, -b], [-c, a]]), factors=self.factors)

    def apply(self, p: Point) -> Point:
        return Point.from_symmetric(self.m @ p.symmetric @ self.m.T)

    def same_as(self, other: Isometry, tol: float = METRIC_TOL) -> bool:
        """Equality in PSL(2, R), entrywise after canonical normalization."""
        a = self.canonical().m
        b = other.canonical().m
        return bool(np.abs(a - b).max() <= tol * max(1.0, float(np.abs(a).max())))

    def is_identity(self, tol: float = METRIC_TOL) -> bool:
        return self.same_as(Isometry.identity(), tol)


def distance(p: Point, q: Point, tol: float = METRIC_TOL) -> float:
    """Hyperbolic distance, arccosh(-<p,q>) evaluated through asinh."""
    c = -minkowski(p.vec, q.vec)
    if c < 1.0 - tol * max(1.0, p.x0 * q.x0):
        raise InvalidPoint(f"-<p,q> = {c} < 1")
    diff = p.vec - q.vec
    chord2 = max(minkowski(diff, diff), 0.0)
    return 2.0 * math.asinh(math.sqrt(chord2) / 2.0)


def half_turn(p: Point) -> Isometry:
    """Rotation by pi about p; the matrix P·J has trace zero and fixes p."""
    return Isometry(p.symmetric @ _J)


def fixed_point(g: Isometry) -> Point:
    """Fixed point of a half-turn."""
    if abs(g.trace) > CLASSIFY_TOL * 1e3:
        raise ValueError(f"Not a half-turn: trace {g.trace}")
    a, b, c, _ = g.m.flat
    sym = np.array([[-b, a], [a, c]])
    if sym[0, 0] < 0:
        sym = -sym
    return Point.from_symmetric(sym)


def translation(d: float) -> Isometry:
    """Translation by d along the x1-axis through the origin."""
    return Isometry(np.diag([math.exp(d / 2.0), math.exp(-d / 2.0)]))


def rotation(theta: float) -> Isometry:
    """Anticlockwise rotation by theta about the origin."""
    c, s = math.cos(theta / 2.0), math.sin(theta / 2.0)
    return Isometry(np.array([[c, -s], [s, c]]))


def reflect(p: Point) -> Point:
    """The orientation-reversing map x2 -> -x2."""
    return Point(p.x0, p.x1, -p.x2)


def translation_length(g: Isometry, tol: float = CLASSIFY_TOL) -> float:
    if not g.is_hyperbolic(tol):
        raise NotHyperbolic(f"|tr| = {abs(g.trace)} is not > 2")
    return 2.0 * math.acosh(abs(g.trace) / 2.0)


def _eigenvector(m: np.ndarray, lam: float) -> np.ndarray:
    a, b, c, d = m.flat
    first = np.array([b, lam - a])
    second = np.array([lam - d, c])
    return first if np.hypot(*first) >= np.hypot(*second) else second


def axis_point(g: Isometry, s: float, tol: float = CLASSIFY_TOL) -> Point:
    """Point at signed arc length s along the axis of g.

    s = 0 is the axis point closest to the origin and s increases in the
    translation direction of g.
    """
    if not g.is_hyperbolic(tol):
        raise NotHyperbolic(f"|tr| = {abs(g.trace)} is not > 2")
    m = g.m if g.trace > 0 else -g.m
    tr = float(m[0, 0] + m[1, 1])
    lam = (tr + math.sqrt(tr * tr - 4.0)) / 2.0
    v1 = _eigenvector(m, lam)
    v2 = _eigenvector(m, 1.0 / lam)
    det = v1[0] * v2[1] - v1[1] * v2[0]
    if det < 0:
        v2 = -v2
        det = -det
    scale = 1.0 / math.sqrt(det)
    v1, v2 = v1 * scale, v2 * scale
    s0 = math.log(np.hypot(*v2) / np.hypot(*v1))
    t = s0 + s
    sym = math.exp(t) * np.outer(v1, v1) + math.exp(-t) * np.outer(v2, v2)
    return Point.from_symmetric(sym)


def angle_at(v: Point, a: Point, b: Point) -> float:
    """Angle at v between the geodesic rays towards a and b."""
    ua = a.vec + minkowski(v.vec, a.vec) * v.vec
    ub = b.vec + minkowski(v.vec, b.vec) * v.vec
    cos = minkowski(ua, ub) / math.sqrt(minkowski(ua, ua) * minkowski(ub, ub))
    return math.acos(max(-1.0, min(1.0, cos)))


def geodesic_intersection(p1: Point, q1: Point, p2: Point, q2: Point) -> Point:
    """Intersection of the geodesic lines p1q1 and p2q2."""
    x = np.cross(np.cross(p1.vec, q1.vec), np.cross(p2.vec, q2.vec))
    if -minkowski(x, x) <= 0:
        raise DegenerateIncidence("Geodesic lines do not meet in the plane")
    return Point.from_vector(x)


def orientation(a: Point, b: Point, c: Point) -> float:
    """Signed area of the triangle abc in a Klein chart centred at a.

    Positive when anticlockwise. Recentring keeps the sign reliable for
    triangles far from the origin.
    """
    boost = _boost_to_origin(a)
    kb, kc = _chart(boost, b), _chart(boost, c)
    return float(kb[0] * kc[1] - kb[1] * kc[0])


def directions_from(v: Point, *points: Point) -> list[np.ndarray]:
    """Unit directions at v towards each point, in a Klein chart centred at v."""
    boost = _boost_to_origin(v)
    out = []
    for p in points:
        k = _chart(boost, p)
        norm = float(np.hypot(*k))
        if norm == 0.0:
            raise DegenerateIncidence("Direction towards v itself is undefined")
        out.append(k / norm)
    return out


def coincide(p: Point, q: Point, tol: float = COINCIDE_TOL) -> bool:
    """True when the chord from p to q is at most tol, scaled by the larger height x0."""
    diff = p.vec - q.vec
    chord = math.sqrt(max(minkowski(diff, diff), 0.0))
    return chord <= tol * max(1.0, p.x0, q.x0)


@dataclass(frozen=True)
class Segment:
    """Geodesic segment between two points."""

    p: Point
    q: Point

    @property
    def length(self) -> float:
        return distance(self.p, self.q)

    def reversed(self) -> Segment:
        return Segment(self.q, self.p)


def side_offset(p: Point, q: Point, x: Point) -> float:
    """sinh of the signed distance from x to the line through p and q.

    Positive when x lies to the left of the direction from p to q. The value
    is det[p, q, x] normalized by sinh d(p, q), so it needs no chart.
    """
    span = math.sinh(distance(p, q))
    if span == 0.0:
        raise DegenerateIncidence("A line needs two distinct points")
    return float(np.cross(p.vec, q.vec) @ x.vec) / span


def _near_line(value: float, x: Point, tol: float) -> bool:
    return abs(value) <= tol * max(1.0, x.x0)


def _between(lo: Point, hi: Point, x: Point) -> bool:
    """For x on the line through lo and hi: x lies in the closed segment."""
    span = distance(lo, hi)
    excess = distance(lo, x) + distance(x, hi) - span
    return excess <= BETWEEN_TOL * max(1.0, span)


def segments_cross(a: Segment, b: Segment, tol: float = INCIDENCE_TOL) -> bool:
    """True iff the open segments meet transversally.

    Segments that only share an endpoint do not cross; overlaps and contacts
    at the endpoint of one segment raise DegenerateIncidence.
    """
    shared = [x for x in (a.p, a.q) if coincide(x, b.p) or coincide(x, b.q)]
    if len(shared) >= 2:
        raise DegenerateIncidence("Segments share both endpoints")

    if shared:
        s = shared[0]
        ka = a.q if s is a.p else a.p
        kb = b.q if coincide(s, b.p) else b.p
        on_line = _near_line(side_offset(s, ka, kb), kb, tol)
        if on_line and angle_at(s, ka, kb) < math.pi / 2:
            raise DegenerateIncidence("Segments overlap along a common ray")
        return False

    d1 = side_offset(b.p, b.q, a.p)
    d2 = side_offset(b.p, b.q, a.q)
    d3 = side_offset(a.p, a.q, b.p)
    d4 = side_offset(a.p, a.q, b.q)

    collinear = (_near_line(d1, a.p, tol) and _near_line(d2, a.q, tol)) or (
        _near_line(d3, b.p, tol) and _near_line(d4, b.q, tol)
    )
    if collinear:
        if _between(a.p, a.q, b.p) or _between(a.p, a.q, b.q) or _between(b.p, b.q, a.p):
            raise DegenerateIncidence("Collinear overlapping segments")
        return False

    touching = ((d1, a.p, b), (d2, a.q, b), (d3, b.p, a), (d4, b.q, a))
    for value, point, other in touching:
        if _near_line(value, point, tol):
            if _between(other.p, other.q, point):
                raise DegenerateIncidence("Endpoint lies on the other segment")
            return False

    return (d1 > 0) != (d2 > 0) and (d3 > 0) != (d4 > 0)


def _boost_to_origin(c: Point) -> np.ndarray:
    """Lorentz boost taking c to (1, 0, 0)."""
    g, c1, c2 = c.x0, c.x1, c.x2
    k = 1.0 / (1.0 + g)
    return np.array(
        [
            [g, -c1, -c2],
            [-c1, 1.0 + c1 * c1 * k, c1 * c2 * k],
            [-c2, c1 * c2 * k, 1.0 + c2 * c2 * k],
        ]
    )


def _chart(boost: np.ndarray, p: Point) -> np.ndarray:
    v = boost @ p.vec
    return np.array([v[1] / v[0], v[2] / v[0]])


def to_origin(p: Point) -> Isometry:
    """An isometry taking p to the origin."""
    d = math.asinh(math.hypot(p.x1, p.x2))
    theta = math.atan2(p.x2, p.x1)
    return (rotation(theta) @ translation(d)).inverse()
