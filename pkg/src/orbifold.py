"""Construction of marked orbifolds and the two certificate orbifolds."""

from __future__ import annotations

import logging
import math
from functools import lru_cache

import numpy as np
from scipy.optimize import least_squares

from .config import DEFAULT_CONFIG, Config
from .errors import ConstructionFailure, InvalidParams, Maskit2Error
from .hyperbolic import (
    Isometry,
    Point,
    axis_point,
    distance,
    half_turn,
    origin,
    reflect,
    rotation,
    translation,
)
from .models import Holonomy, PantsFoldParams, _signed_area

logger = logging.getLogger(__name__)

OCT_EDGE = math.acosh(1.0 + math.sqrt(2.0))

SOLVER_CAP = 200

# Anticlockwise turn used when laying out the right-angled hexagon.
_TURN = -math.pi / 2.0


def seam_lengths(a1: float, a3: float, a5: float) -> tuple[float, float]:
    """Seams s13 and s51 of the right-angled hexagon with alternate sides a1, a3, a5."""

    def seam(x: float, y: float, opposite: float) -> float:
        c = (math.cosh(opposite) + math.cosh(x) * math.cosh(y)) / (
            math.sinh(x) * math.sinh(y)
        )
        if not math.isfinite(c) or c < 1.0:
            raise InvalidParams(f"Seam formula out of range: cosh = {c}")
        return math.acosh(c)

    return seam(a1, a3, a5), seam(a5, a1, a3)


def _boundary_frames(a1: float, a3: float, a5: float) -> list[Isometry]:
    """Frames at the seam feet on L1, L3, L5, facing the translation direction."""
    s13, s51 = seam_lengths(a1, a3, a5)
    frame1 = Isometry.identity()
    # foot of M13 on L3, then back along L3 to the foot of M35
    frame3 = rotation(_TURN) @ translation(s13) @ rotation(_TURN) @ translation(-a3)
    frame5 = translation(a1) @ rotation(_TURN) @ translation(s51) @ rotation(_TURN)
    return [frame1, frame3, frame5]


def boundary_holonomies(params: PantsFoldParams) -> tuple[Isometry, Isometry, Isometry]:
    """X1, X3, X5 with translation lengths 2a_i and X1·X3·X5 = I."""
    frames = _boundary_frames(*params.lengths)
    return tuple(
        f @ translation(2.0 * a) @ f.inverse() for f, a in zip(frames, params.lengths)
    )


def _axis_offset(x: Isometry, foot: Point) -> float:
    """Axis coordinate of a point on the axis of x."""
    base = axis_point(x, 0.0)
    d = distance(base, foot)
    forward = distance(axis_point(x, d), foot)
    backward = distance(axis_point(x, -d), foot)
    return d if forward <= backward else -d


def build(params: PantsFoldParams, cfg: Config = DEFAULT_CONFIG) -> Holonomy:
    """Marked orbifold from pants-and-fold coordinates."""
    for name, a in zip(("a1", "a3", "a5"), params.lengths):
        if not cfg.a_min <= a <= cfg.a_max:
            raise InvalidParams(f"{name}={a} outside [{cfg.a_min}, {cfg.a_max}]")

    frames = _boundary_frames(*params.lengths)
    xs = boundary_holonomies(params)
    lifts: list[Point] = []
    for frame, x, a, t in zip(frames, xs, params.lengths, params.twists):
        offset = _axis_offset(x, frame.apply(origin()))
        # half_turn(ahead)·half_turn(behind) translates from behind to ahead, i.e. X
        ahead = axis_point(x, offset + t + a)
        behind = axis_point(x, offset + t)
        lifts.extend([ahead, behind])

    if _signed_area(lifts) < 0:
        lifts = [reflect(p) for p in lifts]

    holonomy = Holonomy(tuple(half_turn(p) for p in lifts), tuple(lifts), 1)
    Holonomy._validate_hexagon(holonomy.hbar_lifts, -1, "H̄")
    logger.debug(f"Built marking for {params}")
    return holonomy


def rotate(h: Holonomy, r: int) -> Holonomy:
    """Relabel the necklace so that ω_i becomes ω_{i-r}."""
    r %= 6
    return Holonomy(h.R[r:] + h.R[:r], h.w[r:] + h.w[:r], h.orientation)


def mirror(h: Holonomy) -> Holonomy:
    """Orientation-reversed marking; the reflected H̄ tile becomes the new H."""
    lifts = tuple(reflect(p) for p in h.hbar_lifts)
    return Holonomy(tuple(half_turn(p) for p in lifts), lifts, h.orientation)


def conjugate(h: Holonomy, g: Isometry) -> Holonomy:
    """The same marking moved by a global isometry."""
    lifts = tuple(g.apply(p) for p in h.w)
    return Holonomy(tuple(half_turn(p) for p in lifts), lifts, h.orientation)


def random_params(rng: np.random.Generator, cfg: Config = DEFAULT_CONFIG) -> PantsFoldParams:
    a = rng.uniform(cfg.a_min, cfg.a_max, size=3)
    t = rng.uniform(0.0, 2.0 * a)
    return PantsFoldParams(*(float(x) for x in a), *(float(x) for x in t))


def _oct_edges(h: Holonomy) -> np.ndarray:
    """The twelve octahedron-edge lengths: necklace plus the 135 and 246 triangles."""
    w, wb = h.w, h.hbar_lifts
    edges = list(h.necklace_lengths())
    edges += [distance(w[0], w[2]), distance(w[2], w[4]), distance(w[0], w[4])]
    edges += [distance(wb[1], wb[3]), distance(wb[3], wb[5]), distance(wb[1], wb[5])]
    return np.array(edges)


def _oct_residual(x: np.ndarray) -> np.ndarray:
    t = float(x[0])
    try:
        h = build(PantsFoldParams(OCT_EDGE, OCT_EDGE, OCT_EDGE, t, t, t))
    except Maskit2Error:
        return np.full(12, 10.0)
    return _oct_edges(h) - OCT_EDGE


@lru_cache(maxsize=1)
def oct() -> tuple[PantsFoldParams, Holonomy]:
    """The octahedral orbifold, solved along the symmetric slice t1 = t3 = t5.

    Twists t and t + 2a give different markings, so the search covers one
    full period centred at zero and the solution is returned unwrapped.
    """
    grid = np.linspace(-OCT_EDGE, OCT_EDGE, 241)[:-1]
    scores = [float(np.abs(_oct_residual(np.array([t]))).max()) for t in grid]
    start = float(grid[int(np.argmin(scores))])
    result = least_squares(
        _oct_residual,
        x0=[start],
        xtol=1e-15,
        ftol=1e-15,
        gtol=1e-15,
        max_nfev=SOLVER_CAP,
    )
    t = float(result.x[0])
    residual = float(np.abs(_oct_residual(np.array([t]))).max())
    if residual > 1e-9:
        raise ConstructionFailure(f"Octahedral solve stalled at residual {residual:.3e}")
    params = PantsFoldParams(OCT_EDGE, OCT_EDGE, OCT_EDGE, t, t, t)
    logger.info(f"Octahedral orbifold: t = {t:.15f}, residual {residual:.2e}")
    return params, build(params)


def exceptional_residuals(h: Holonomy) -> np.ndarray:
    """Residuals of the equality list realized on the exceptional orbifold."""
    from .models import ArcLabel
    from .tessellation import develop_label

    def ell(text: str) -> float:
        return develop_label(h, ArcLabel.parse(text)).length

    g1, g2, g3, g4, g5, _ = h.necklace_lengths()
    return np.array(
        [
            g1 - g5,
            ell("B13") - g2,
            ell("b14") - g2,
            ell("b24") - g2,
            ell("B34^6") - g3,
            ell("B35") - g3,
            ell("B36") - g3,
            ell("b46") - g4,
        ]
    )


def _exceptional_residual(x: np.ndarray) -> np.ndarray:
    try:
        h = build(PantsFoldParams(*(float(v) for v in x)))
        return exceptional_residuals(h)
    except Maskit2Error:
        return np.full(8, 10.0)


def _exceptional_starts(count: int) -> list[np.ndarray]:
    rng = np.random.default_rng(20020601)
    starts = [np.array([OCT_EDGE] * 3 + [0.5 * OCT_EDGE] * 3)]
    for _ in range(count - 1):
        a = rng.uniform(0.9, 2.1, size=3)
        t = rng.uniform(-a, a)
        starts.append(np.concatenate([a, t]))
    return starts


@lru_cache(maxsize=4)
def exceptional_candidates(starts: int = 48) -> tuple[tuple[PantsFoldParams, Holonomy], ...]:
    """All distinct in-domain solutions of the exceptional equality list."""
    from .maskit import check

    cfg = DEFAULT_CONFIG
    lower = [cfg.a_min] * 3 + [-np.inf] * 3
    upper = [cfg.a_max] * 3 + [np.inf] * 3
    found: list[tuple[PantsFoldParams, Holonomy, tuple[float, ...]]] = []
    for x0 in _exceptional_starts(starts):
        result = least_squares(
            _exceptional_residual,
            x0=x0,
            bounds=(lower, upper),
            xtol=1e-15,
            ftol=1e-15,
            gtol=1e-15,
            max_nfev=SOLVER_CAP * 6,
        )
        if float(np.abs(result.fun).max()) > 1e-9:
            continue
        params = PantsFoldParams(*(float(v) for v in result.x))
        try:
            h = build(params)
            if not check(h).in_domain:
                continue
        except Maskit2Error as e:
            logger.debug(f"Discarding exceptional candidate {params}: {e}")
            continue
        table = tuple(sorted(round(v, 7) for v in h.necklace_lengths()))
        if any(table == other for _, _, other in found):
            continue
        found.append((params, h, table))
        logger.info(f"Exceptional candidate {len(found)}: {params}")
    found.sort(key=lambda item: item[2])
    return tuple((p, h) for p, h, _ in found)


def exceptional() -> tuple[PantsFoldParams, Holonomy]:
    """The exceptional orbifold with Z2 x Z2 symmetry."""
    candidates = exceptional_candidates()
    if not candidates:
        raise ConstructionFailure("No exceptional solution found from the start grid")
    if len(candidates) > 1:
        logger.info(f"{len(candidates)} distinct exceptional solutions; using the first")
    return candidates[0]


__all__ = [
    "OCT_EDGE",
    "boundary_holonomies",
    "build",
    "conjugate",
    "exceptional",
    "exceptional_candidates",
    "exceptional_residuals",
    "mirror",
    "oct",
    "random_params",
    "rotate",
    "seam_lengths",
]


