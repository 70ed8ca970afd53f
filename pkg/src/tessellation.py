"""Two-colored hexagon tessellation, tile walking and arc enumeration.

The base H-tile has vertices w_1..w_6 and the base H̄-tile has vertices
w̄_k = (R_1···R_{k-1})·w_k. A tile is a developing word g applied to one of
the two base tiles; side i of every tile joins its vertices labeled i and
i+1, and vertex k always lies over the cone point ω_k.

Walks carry the segment into the frame of the tile they are in, so every
incidence test compares a base hexagon with a segment passing through it.
Absolute coordinates of far tiles are kept only for bookkeeping.
"""

from __future__ import annotations

import logging
import math
from collections import deque
from dataclasses import dataclass
from functools import lru_cache

from .config import DEFAULT_CONFIG, Config
from .errors import (
    DegenerateIncidence,
    DepthExceeded,
    InvalidPoint,
    InvalidQuery,
    TessellationError,
)
from .hyperbolic import (
    INCIDENCE_TOL,
    Isometry,
    Point,
    Segment,
    angle_at,
    coincide,
    directions_from,
    distance,
    geodesic_intersection,
    orientation,
    segments_cross,
)
from .models import ArcInstance, ArcLabel, Holonomy, Piece, Side, Tile, cyclic

logger = logging.getLogger(__name__)

ADJACENCY_TOL = 1e-6
CLOSURE_TOL = 1e-7
WEDGE_TOL = 1e-12


def base_tile(h: Holonomy, parity: Side = Side.H) -> Tile:
    if parity is Side.H:
        return Tile(Isometry.identity(), Side.H, h.w)
    return hbar_base(h)


def hbar_base(h: Holonomy) -> Tile:
    """The H̄-tile sharing side 6 with the base H-tile."""
    return Tile(Isometry.identity(), Side.HBAR, h.hbar_lifts)


def tile_at(h: Holonomy, g: Isometry, parity: Side) -> Tile:
    base = h.w if parity is Side.H else h.hbar_lifts
    return Tile(g, parity, tuple(g.apply(p) for p in base))


def _step(h: Holonomy, parity: Side, i: int) -> Isometry:
    """Word taking the other base tile onto the neighbour across side i."""
    return h.prefix_inverse[i] if parity is Side.H else h.prefix[i]


def _opposite_sides(a: Point, b: Point, x: Point, y: Point) -> bool:
    return orientation(a, b, x) * orientation(a, b, y) < 0


def _check_adjacent(t: Tile, u: Tile, i: int) -> None:
    a, b = t.vertex(i), t.vertex(i + 1)
    shared = coincide(a, u.vertex(i), ADJACENCY_TOL) and coincide(
        b, u.vertex(i + 1), ADJACENCY_TOL
    )
    if not shared:
        raise TessellationError(f"Tiles across side {i} do not share its endpoints")
    if not _opposite_sides(a, b, t.vertex(i + 3), u.vertex(i + 3)):
        raise TessellationError(f"Tiles across side {i} overlap")


@lru_cache(maxsize=256)
def _verify_adjacency(h: Holonomy) -> None:
    """Check the twelve adjacencies of the base tiles; all others are their images."""
    for parity in (Side.H, Side.HBAR):
        t = base_tile(h, parity)
        for i in range(1, 7):
            _check_adjacent(t, tile_at(h, _step(h, parity, i), parity.opposite), i)


def adjacent(h: Holonomy, t: Tile, i: int, check: bool = True) -> Tile:
    """The tile of opposite parity across side i of t."""
    i = cyclic(i)
    if check:
        _verify_adjacency(h)
    return tile_at(h, t.g @ _step(h, t.parity, i), t.parity.opposite)


def _around(h: Holonomy, parity: Side, k: int) -> list[Tile]:
    """The four tiles at vertex k of the base tile of this parity, base first."""
    out = [base_tile(h, parity)]
    for side in (k, k - 1, k):
        out.append(adjacent(h, out[-1], side))
    if not adjacent(h, out[-1], k - 1).g.is_identity(CLOSURE_TOL):
        raise TessellationError(f"Tiles around vertex {k} do not close up")
    return out


def tiles_around(h: Holonomy, t: Tile, k: int) -> list[Tile]:
    """The four tiles meeting at vertex k of t, starting with t."""
    local = _around(h, t.parity, cyclic(k))
    return [t] + [tile_at(h, t.g @ u.g, u.parity) for u in local[1:]]


def vertex_angle_sum(h: Holonomy, t: Tile, k: int) -> float:
    total = 0.0
    for u in _around(h, t.parity, cyclic(k)):
        total += angle_at(u.vertex(k), u.vertex(k - 1), u.vertex(k + 1))
    return total


def _lift_map(h: Holonomy, t: Tile, k: int) -> Isometry:
    """The element taking w_k to vertex k of t."""
    k = cyclic(k)
    return t.g if t.parity is Side.H else t.g @ h.prefix[k - 1]


def _wedge_tile(
    h: Holonomy, parity: Side, k: int, target: Point, tol: float
) -> tuple[Tile, bool]:
    """Tile around vertex k of the base tile that the ray towards target enters.

    Everything is in the base frame. The flag is True when the ray runs along
    a side of that tile and ends at the side's other vertex, i.e. the segment
    is a necklace side.
    """
    for t in _around(h, parity, cyclic(k)):
        v = t.vertex(k)
        nxt, prv, d = directions_from(v, t.vertex(k + 1), t.vertex(k - 1), target)
        sign = math.copysign(1.0, float(nxt[0] * prv[1] - nxt[1] * prv[0]))
        left = sign * float(nxt[0] * d[1] - nxt[1] * d[0])
        right = sign * float(d[0] * prv[1] - d[1] * prv[0])
        if left > WEDGE_TOL and right > WEDGE_TOL:
            return t, False
        for edge, value, other in ((nxt, left, k + 1), (prv, right, k - 1)):
            if abs(value) <= WEDGE_TOL and float(edge @ d) > 0:
                if coincide(target, t.vertex(other), tol):
                    return t, True
                raise DegenerateIncidence(f"Segment runs along a side at ω{k} past a cone point")
    raise DegenerateIncidence(f"Segment direction at vertex {k} fits no tile")


@dataclass(frozen=True)
class Walk:
    """Result of walking one geodesic segment through the tessellation.

    Pieces are in the frame of the tile they lie in, i.e. in a base tile.
    """

    start: Tile
    tiles: tuple[Tile, ...]
    crossings: tuple[int, ...]
    pieces: tuple[Piece, ...]

    @property
    def start_side(self) -> Side:
        return self.start.parity

    @property
    def end(self) -> Tile:
        return self.tiles[-1]

    @property
    def length(self) -> float:
        return sum(piece.segment.length for piece in self.pieces)


def _walk(
    h: Holonomy,
    start: Tile,
    j: int,
    s: Segment,
    cfg: Config = DEFAULT_CONFIG,
    limit: int | None = None,
) -> Walk:
    """Walk s from vertex j of start (or one of the tiles around it) to its end.

    With a limit, walks crossing more than limit sides stop with DepthExceeded.
    """
    budget = cfg.tile_budget if limit is None else min(cfg.tile_budget, limit)
    into = start.g.inverse()
    p, q = into.apply(s.p), into.apply(s.q)
    wedge, along_side = _wedge_tile(h, start.parity, j, q, cfg.vertex_tol)
    first = tile_at(h, start.g @ wedge.g, wedge.parity)
    into = wedge.g.inverse()
    p, q = into.apply(p), into.apply(q)
    parity = wedge.parity
    if along_side:
        return Walk(first, (first,), (), (Piece(parity, Segment(p, q)),))

    tiles = [first]
    crossings: list[int] = []
    pieces: list[Piece] = []
    entry: int | None = None
    enter_at = p
    current = first
    while True:
        here = base_tile(h, parity)
        if any(coincide(q, v, cfg.vertex_tol) for v in here.vertices):
            pieces.append(Piece(parity, Segment(enter_at, q)))
            return Walk(first, tuple(tiles), tuple(crossings), tuple(pieces))
        if len(crossings) >= budget:
            raise DepthExceeded(f"Walk crossed {budget} sides without reaching its end")
        chord = Segment(enter_at, q)
        exits = [
            i
            for i in range(1, 7)
            if i != entry and segments_cross(chord, here.side(i), cfg.incidence_tol)
        ]
        if len(exits) != 1:
            raise DegenerateIncidence(f"Segment leaves a tile through {len(exits)} sides")
        i = exits[0]
        side = here.side(i)
        x = geodesic_intersection(enter_at, q, side.p, side.q)
        pieces.append(Piece(parity, Segment(enter_at, x)))
        crossings.append(i)
        back = _step(h, parity, i).inverse()
        enter_at, q = back.apply(x), back.apply(q)
        current = adjacent(h, current, i)
        parity = current.parity
        tiles.append(current)
        entry = i


def locate_vertex(h: Holonomy, p: Point, cfg: Config = DEFAULT_CONFIG) -> tuple[Tile, int]:
    """A tile having p as a vertex, found breadth-first from the base tiles."""
    seen: list[tuple[Isometry, Side]] = [(Isometry.identity(), Side.H)]
    queue = deque([base_tile(h, Side.H)])
    visited = 0
    while queue and visited < cfg.tile_budget * 6:
        t = queue.popleft()
        visited += 1
        for k in range(1, 7):
            if coincide(t.vertex(k), p, cfg.vertex_tol):
                return t, k
        for i in range(1, 7):
            u = adjacent(h, t, i, check=False)
            if any(u.parity is side and u.g.same_as(g, CLOSURE_TOL) for g, side in seen):
                continue
            seen.append((u.g, u.parity))
            queue.append(u)
    raise DepthExceeded("Point is not a cone-point lift within the tile budget")


def trace_segment(
    h: Holonomy, s: Segment, cfg: Config = DEFAULT_CONFIG
) -> tuple[Side, tuple[int, ...]]:
    """Start side and ordered necklace crossings of a segment between cone-point lifts."""
    start, j = locate_vertex(h, s.p, cfg)
    walk = _walk(h, start, j, s, cfg)
    return walk.start_side, walk.crossings


def _label_from_walk(j: int, k: int, walk: Walk) -> ArcLabel:
    if j < k:
        return ArcLabel(j, k, walk.start_side, walk.crossings).canonical()
    return ArcLabel(k, j, walk.end.parity, tuple(reversed(walk.crossings))).canonical()


def _self_crossings(pieces: tuple[Piece, ...], tol: float) -> int:
    count = 0
    for n, a in enumerate(pieces):
        for b in pieces[n + 1 :]:
            if a.parity is b.parity and segments_cross(a.segment, b.segment, tol):
                count += 1
    return count


def _instance(
    h: Holonomy,
    label: ArcLabel,
    j: int,
    k: int,
    start: Tile,
    end: Tile,
    walk: Walk | None,
    cfg: Config,
) -> ArcInstance:
    p, q = start.vertex(j), end.vertex(k)
    pieces = walk.pieces if walk is not None else ()
    verified = walk is not None and _label_from_walk(j, k, walk) == label
    try:
        simple = _self_crossings(pieces, cfg.incidence_tol) == 0
    except DegenerateIncidence:
        simple = False
    s_deck, e_deck = _lift_map(h, start, j), _lift_map(h, end, k)
    if j > k:
        p, q, s_deck, e_deck = q, p, e_deck, s_deck
    return ArcInstance(
        label=label,
        length=walk.length if walk is not None else distance(p, q),
        start_lift=p,
        endpoint_lift=q,
        verified=verified,
        simple=simple,
        converged=len(label.crossings) <= cfg.max_word - 2,
        start_deck=s_deck,
        end_deck=e_deck,
        pieces=pieces,
        path=walk.crossings if walk is not None else (),
    )


def develop_label(h: Holonomy, label: ArcLabel, cfg: Config = DEFAULT_CONFIG) -> ArcInstance:
    """Realize a labeled arc by walking its crossing sequence from ω_j."""
    label = label.canonical()
    start = base_tile(h, label.start_side)
    end = start
    for i in label.crossings:
        end = adjacent(h, end, i)
    s = Segment(start.vertex(label.j), end.vertex(label.k))
    try:
        walk = _walk(h, start, label.j, s, cfg)
    except (DegenerateIncidence, DepthExceeded, InvalidPoint) as e:
        logger.debug(f"{label} does not trace cleanly: {e}")
        walk = None
    return _instance(h, label, label.j, label.k, start, end, walk, cfg)


def _candidate_words(h: Holonomy, j: int, depth: int):
    """Tiles reachable from the base tiles at vertex j by non-backtracking side walks."""
    for parity in (Side.H, Side.HBAR):
        start = base_tile(h, parity)
        stack: list[tuple[Tile, tuple[int, ...]]] = [(start, ())]
        while stack:
            t, path = stack.pop()
            yield start, t, path
            if len(path) == depth:
                continue
            for i in range(1, 7):
                if path and i == path[-1]:
                    continue
                if not path and j in (i, cyclic(i + 1)):
                    continue
                stack.append((adjacent(h, t, i, check=False), path + (i,)))


def _enumerate_from(
    h: Holonomy, j: int, targets: set[int], cfg: Config
) -> dict[int, list[ArcInstance]]:
    found: dict[int, list[ArcInstance]] = {k: [] for k in targets}
    endpoints: dict[tuple[Side, int], list[Point]] = {}
    for start, t, path in _candidate_words(h, j, cfg.depth):
        p = start.vertex(j)
        for k in targets:
            q = t.vertex(k)
            known = endpoints.setdefault((start.parity, k), [])
            if any(coincide(q, seen, cfg.vertex_tol) for seen in known):
                continue
            known.append(q)
            try:
                walk = _walk(h, start, j, Segment(p, q), cfg, limit=cfg.max_cross)
            except (DegenerateIncidence, DepthExceeded, InvalidPoint) as e:
                logger.debug(f"Skipping ω{j}→ω{k} via {path}: {e}")
                continue
            arc = _instance(h, _label_from_walk(j, k, walk), j, k, walk.start, walk.end, walk, cfg)
            if arc.simple:
                found[k].append(arc)
    for k, arcs in found.items():
        found[k] = _dedupe(arcs)
    return found


def _dedupe(arcs: list[ArcInstance]) -> list[ArcInstance]:
    """One arc per label; a label fixes the developing path and so the geodesic."""
    out: dict[ArcLabel, ArcInstance] = {}
    for arc in sorted(arcs, key=lambda a: (a.length, a.label)):
        out.setdefault(arc.label, arc)
    return list(out.values())


def enumerate_arcs(
    h: Holonomy,
    j: int,
    k: int,
    max_word: int | None = None,
    max_cross: int | None = None,
    cfg: Config = DEFAULT_CONFIG,
) -> list[ArcInstance]:
    """Simple arcs between ω_j and ω_k, ascending by length then label."""
    if j == k:
        raise InvalidQuery(f"Arc endpoints must differ, got ω{j} twice")
    if not (1 <= j <= 6 and 1 <= k <= 6):
        raise InvalidQuery(f"Cone indices out of range: {j}, {k}")
    cfg = cfg.bounded(max_word=max_word, max_cross=max_cross)
    return _enumerate_from(h, j, {k}, cfg)[k]


def crossing_count(a: ArcInstance, b: ArcInstance, tol: float = INCIDENCE_TOL) -> int:
    """X(α, β): transverse intersections away from the cone points."""
    ia, ib = a.label.necklace_index, b.label.necklace_index
    if ia is not None and ib is not None:
        return 0
    if ia is not None:
        return b.label.crossings.count(ia)
    if ib is not None:
        return a.label.crossings.count(ib)
    count = 0
    for pa in a.pieces:
        for pb in b.pieces:
            if pa.parity is pb.parity and segments_cross(pa.segment, pb.segment, tol):
                count += 1
    return count


class ArcCatalog:
    """Per-marking cache of enumerated arcs, keyed by their smaller endpoint."""

    def __init__(self, h: Holonomy, cfg: Config = DEFAULT_CONFIG):
        self.h = h
        self.cfg = cfg
        self._by_pair: dict[tuple[int, int], list[ArcInstance]] = {}
        self._labels: dict[ArcLabel, ArcInstance] = {}

    def between(self, j: int, k: int) -> list[ArcInstance]:
        lo, hi = min(j, k), max(j, k)
        if lo == hi:
            raise InvalidQuery(f"Arc endpoints must differ, got ω{j} twice")
        if (lo, hi) not in self._by_pair:
            targets = {m for m in range(lo + 1, 7)}
            found = _enumerate_from(self.h, lo, targets, self.cfg)
            for m, arcs in found.items():
                self._by_pair[(lo, m)] = arcs
            logger.debug(f"Enumerated arcs from ω{lo}: {sum(len(a) for a in found.values())}")
        return self._by_pair[(lo, hi)]

    def touching(self, j: int) -> list[ArcInstance]:
        arcs = [a for k in range(1, 7) if k != j for a in self.between(j, k)]
        return sorted(arcs, key=lambda a: (a.length, a.label))

    def all(self) -> list[ArcInstance]:
        arcs = [a for j in range(1, 6) for k in range(j + 1, 7) for a in self.between(j, k)]
        return sorted(arcs, key=lambda a: (a.length, a.label))

    def label(self, label: ArcLabel) -> ArcInstance:
        label = label.canonical()
        if label not in self._labels:
            self._labels[label] = develop_label(self.h, label, self.cfg)
        return self._labels[label]

    def necklace(self, i: int) -> ArcInstance:
        return self.label(ArcLabel.necklace(i))
