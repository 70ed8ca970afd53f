"""The 27 length inequalities, domain checks, minimality and reduction."""

from __future__ import annotations

import logging
from dataclasses import dataclass

from .config import DEFAULT_CONFIG, Config
from .errors import (
    BudgetExceeded,
    CompletionError,
    DegenerateIncidence,
    DomainCheckError,
    Maskit2Error,
    ReductionFailure,
)
from .hyperbolic import (
    INCIDENCE_TOL,
    Isometry,
    Point,
    coincide,
    half_turn,
    orientation,
    to_origin,
)
from .models import ArcInstance, ArcLabel, Holonomy, Side
from .tessellation import ArcCatalog, crossing_count

logger = logging.getLogger(__name__)

DOMAIN_TOL = 1e-9
TIGHT_TOL = 1e-7


@dataclass(frozen=True)
class InequalityEntry:
    """ℓ(γ_lhs) ≤ ℓ(rhs)."""

    group: int
    lhs: int
    rhs: ArcLabel

    def __post_init__(self):
        if not 1 <= self.lhs <= 4:
            raise ValueError(f"Left-hand side must be γ1..γ4, got γ{self.lhs}")
        if self.rhs.canonical() == ArcLabel.necklace(self.lhs):
            raise ValueError(f"γ{self.lhs} compared with itself")

    def __str__(self) -> str:
        return f"γ{self.lhs} <= {self.rhs.display()}"


InequalityTable = tuple[InequalityEntry, ...]


def theorem1_table() -> InequalityTable:
    """The 27 inequalities, grouped by the chain arc they bound."""
    entries: list[InequalityEntry] = []

    for i in (2, 3, 4, 5):
        entries.append(InequalityEntry(1, 1, ArcLabel.necklace(i)))

    group2: list[ArcLabel] = []
    for i in (1, 2):
        for j in (3, 4, 5, 6):
            for side in (Side.H, Side.HBAR):
                group2.append(ArcLabel(i, j, side).canonical())
    group2 += [ArcLabel(2, 5, Side.H, (6,)), ArcLabel(2, 5, Side.HBAR, (6,))]
    seen: set[ArcLabel] = set()
    for label in group2:
        if label in seen or label == ArcLabel.necklace(2):
            continue
        seen.add(label)
        entries.append(InequalityEntry(2, 2, label))

    for j in (5, 6):
        for side in (Side.H, Side.HBAR):
            entries.append(InequalityEntry(3, 3, ArcLabel(3, j, side)))
    for side in (Side.H, Side.HBAR):
        entries.append(InequalityEntry(3, 3, ArcLabel(3, 4, side, (6,))))

    for side in (Side.H, Side.HBAR):
        entries.append(InequalityEntry(4, 4, ArcLabel(4, 6, side)))

    return tuple(entries)


@dataclass(frozen=True)
class Margin:
    entry: InequalityEntry
    lhs_length: float
    rhs_length: float

    @property
    def value(self) -> float:
        return self.rhs_length - self.lhs_length


@dataclass(frozen=True)
class MaskitReport:
    """Margins of all table entries on one marking."""

    margins: tuple[Margin, ...]
    tol: float = DOMAIN_TOL
    tight_tol: float = TIGHT_TOL

    @property
    def in_domain(self) -> bool:
        return all(m.value >= -self.tol for m in self.margins)

    @property
    def tight(self) -> frozenset[tuple[int, ArcLabel]]:
        return frozenset(
            (m.entry.lhs, m.entry.rhs) for m in self.margins if abs(m.value) <= self.tight_tol
        )

    @property
    def worst(self) -> Margin:
        return min(self.margins, key=lambda m: m.value)

    def lengths(self) -> tuple[float, ...]:
        return tuple(m.rhs_length for m in self.margins)


# Tight sets on the two certificate orbifolds, as (lhs, rhs) pairs.
OCT_TIGHT_SET: frozenset[tuple[int, ArcLabel]] = frozenset(
    [(1, ArcLabel.necklace(i)) for i in (2, 3, 4, 5)]
    + [(2, ArcLabel.parse(s)) for s in ("b13", "b15", "b16", "B24", "B26")]
    + [(3, ArcLabel.parse("b35")), (4, ArcLabel.parse("B46"))]
)

EXCEPTIONAL_TIGHT_SET: frozenset[tuple[int, ArcLabel]] = frozenset(
    [(1, ArcLabel.necklace(5))]
    + [(2, ArcLabel.parse(s)) for s in ("B13", "b14", "b24")]
    + [(3, ArcLabel.parse(s)) for s in ("B34^6", "B35", "B36")]
    + [(4, ArcLabel.parse("b46"))]
)


def check(
    h: Holonomy,
    cfg: Config = DEFAULT_CONFIG,
    catalog: ArcCatalog | None = None,
    tol: float | None = None,
) -> MaskitReport:
    """Evaluate every table margin ℓ(rhs) − ℓ(γ_lhs) on h.

    tol defaults to the configured domain tolerance.
    """
    catalog = catalog or ArcCatalog(h, cfg)
    tol = cfg.domain_tol if tol is None else tol
    margins = []
    for entry in theorem1_table():
        arc = catalog.label(entry.rhs)
        if not arc.verified:
            raise DomainCheckError(f"{entry.rhs.display()} is not realized by a verified geodesic")
        lhs = catalog.necklace(entry.lhs).length
        margins.append(Margin(entry, lhs, arc.length))
    report = MaskitReport(tuple(margins), tol)
    logger.debug(f"check: worst margin {report.worst.value:.3e} at {report.worst.entry}")
    return report


def report_rows(report: MaskitReport) -> list[list[str]]:
    rows = [["group", "lhs", "rhs_label", "lhs_len", "rhs_len", "margin"]]
    for m in report.margins:
        rows.append(
            [
                str(m.entry.group),
                f"g{m.entry.lhs}",
                str(m.entry.rhs),
                f"{m.lhs_length:.12g}",
                f"{m.rhs_length:.12g}",
                f"{m.value:.12g}",
            ]
        )
    rows.append(["in_domain", str(report.in_domain).lower(), "", "", "", ""])
    return rows


# Chains


def _disjoint(
    arc: ArcInstance, others: list[ArcInstance], tol: float = INCIDENCE_TOL
) -> bool:
    try:
        return all(crossing_count(arc, o, tol) == 0 for o in others)
    except DegenerateIncidence:
        return False


@dataclass(frozen=True)
class ChainSpec:
    """Chain arcs γ'_1..γ'_n with cones ω'_1..ω'_{n+1} (a necklace when n = 6)."""

    cones: tuple[int, ...]
    arcs: tuple[ArcInstance, ...]

    def __post_init__(self):
        n = len(self.arcs)
        closed = n == 6
        if len(set(self.cones)) != len(self.cones):
            raise ValueError(f"Chain cones repeat: {self.cones}")
        if len(self.cones) != (n if closed else n + 1):
            raise ValueError("A chain of n arcs needs n + 1 cones, a necklace six")
        for m, arc in enumerate(self.arcs):
            ends = {self.cones[m], self.cones[(m + 1) % len(self.cones)]}
            if arc.endpoints != ends:
                raise ValueError(f"Arc {arc.label} does not join ω{sorted(ends)}")

    @property
    def closed(self) -> bool:
        return len(self.arcs) == 6

    def lengths(self) -> tuple[float, ...]:
        return tuple(a.length for a in self.arcs)

    def validate(self, tol: float = INCIDENCE_TOL) -> None:
        """No two chain arcs cross; consecutive ones meet only at their shared cone."""
        n = len(self.arcs)
        for a in range(n):
            for b in range(a + 1, n):
                if not _disjoint(self.arcs[a], [self.arcs[b]], tol):
                    raise CompletionError(f"γ'{a + 1} and γ'{b + 1} cross")


def standard_chain(h: Holonomy, catalog: ArcCatalog | None = None, length: int = 4) -> ChainSpec:
    """The marking's own γ_1..γ_length."""
    catalog = catalog or ArcCatalog(h)
    arcs = tuple(catalog.necklace(i) for i in range(1, length + 1))
    cones = tuple(range(1, 7)) if length == 6 else tuple(range(1, length + 2))
    return ChainSpec(cones, arcs)


def _competitors(
    catalog: ArcCatalog, chain: list[ArcInstance], cones: list[int]
) -> list[ArcInstance]:
    """Arcs that extend the chain γ'_1..γ'_{m-1} at its free end ω'_m."""
    m = len(chain) + 1
    if m == 1:
        return catalog.all()
    if m == 2:
        anchors = cones[:2]
    else:
        anchors = [cones[m - 1]]
    used = set(cones[:m])
    out = []
    for anchor in anchors:
        for arc in catalog.touching(anchor):
            if arc.other_end(anchor) in used:
                continue
            if _disjoint(arc, chain, catalog.cfg.incidence_tol):
                out.append(arc)
    return sorted(out, key=lambda a: (a.length, a.label))


@dataclass(frozen=True)
class MinimalityStep:
    m: int
    chain_length: float
    competitors: int
    witness: ArcInstance | None

    @property
    def margin(self) -> float:
        if self.witness is None:
            return float("inf")
        return self.witness.length - self.chain_length


@dataclass(frozen=True)
class MinimalityReport:
    steps: tuple[MinimalityStep, ...]
    max_word: int
    max_cross: int
    tol: float = DOMAIN_TOL
    partial: bool = False

    @property
    def minimal(self) -> bool:
        return all(s.margin >= -self.tol for s in self.steps)

    @property
    def worst(self) -> float:
        return min(s.margin for s in self.steps)


def verify_minimality(
    h: Holonomy,
    max_word: int | None = None,
    max_cross: int | None = None,
    cfg: Config = DEFAULT_CONFIG,
    catalog: ArcCatalog | None = None,
) -> MinimalityReport:
    """Compare each γ_m against every enumerated competitor extending γ_1..γ_{m-1}."""
    cfg = cfg.bounded(max_word=max_word, max_cross=max_cross)
    catalog = catalog or ArcCatalog(h, cfg)

    cones = [1, 2, 3, 4, 5]
    steps: list[MinimalityStep] = []
    for m in range(1, 5):
        chain = [catalog.necklace(i) for i in range(1, m)]
        competitors = _competitors(catalog, chain, cones)
        gamma = catalog.necklace(m).length
        witness = competitors[0] if competitors else None
        steps.append(MinimalityStep(m, gamma, len(competitors), witness))
        if any(not a.converged for a in competitors):
            partial = MinimalityReport(
                tuple(steps), cfg.max_word, cfg.max_cross, cfg.domain_tol, partial=True
            )
            raise BudgetExceeded(f"Competitors for γ{m} not converged at word bound", partial)
        logger.debug(
            f"minimality m={m}: {len(competitors)} competitors, "
            f"margin {steps[-1].margin:.3e}"
        )
    return MinimalityReport(tuple(steps), cfg.max_word, cfg.max_cross, cfg.domain_tol)


def complete_necklace(
    h: Holonomy, chain: ChainSpec, catalog: ArcCatalog | None = None
) -> ChainSpec:
    """Extend a 4-chain by the unique γ'_5 (ω'_5 to ω'_6) and γ'_6 (ω'_6 to ω'_1)."""
    if len(chain.arcs) != 4:
        raise CompletionError("Only 4-chains are completed")
    catalog = catalog or ArcCatalog(h)
    arcs = list(chain.arcs)
    c = list(chain.cones)
    (c6,) = set(range(1, 7)) - set(c)

    tol = catalog.cfg.incidence_tol
    fifths = [a for a in catalog.between(c[4], c6) if _disjoint(a, arcs, tol)]
    if len(fifths) != 1:
        raise CompletionError(f"{len(fifths)} candidates for γ'5 between ω{c[4]} and ω{c6}")
    sixths = [a for a in catalog.between(c6, c[0]) if _disjoint(a, arcs + fifths, tol)]
    if len(sixths) != 1:
        raise CompletionError(f"{len(sixths)} candidates for γ'6 between ω{c6} and ω{c[0]}")
    necklace = ChainSpec(tuple(c + [c6]), tuple(arcs + fifths + sixths))
    necklace.validate(tol)
    return necklace


def _lifts_at(arc: ArcInstance, cone: int) -> tuple[Point, Isometry, Point, Isometry]:
    """(lift at cone, its deck, lift at the other end, its deck)."""
    if cone == arc.label.j:
        return arc.start_lift, arc.start_deck, arc.endpoint_lift, arc.end_deck
    return arc.endpoint_lift, arc.end_deck, arc.start_lift, arc.start_deck


def rebase(h: Holonomy, necklace: ChainSpec) -> Holonomy:
    """A marking whose necklace is the given one, walked with left turns."""
    if not necklace.closed:
        raise CompletionError("rebase needs a complete necklace")
    cones = necklace.cones
    p, deck, q, q_deck = _lifts_at(necklace.arcs[0], cones[0])
    lifts = [p, q]
    decks = [deck, q_deck]
    for m in range(1, 6):
        arc = necklace.arcs[m]
        cone = cones[m]
        near, near_deck, far, far_deck = _lifts_at(arc, cone)
        options = []
        for turn in (Isometry.identity(), h.r(cone)):
            d = decks[-1] @ turn @ near_deck.inverse()
            options.append((d.apply(far), d @ far_deck))
        left = [o for o in options if orientation(lifts[-2], lifts[-1], o[0]) > 0]
        if len(left) != 1:
            raise CompletionError(f"No unique left turn at ω{cone}")
        lifts.append(left[0][0])
        decks.append(left[0][1])
    if not coincide(lifts[-1], lifts[0], 1e-6):
        raise CompletionError("Necklace lifts do not close up")
    w = lifts[:6]
    centre = to_origin(w[0])
    w = [centre.apply(x) for x in w]
    relabeled = Holonomy(tuple(half_turn(x) for x in w), tuple(w), h.orientation)
    logger.debug(f"Rebased onto cones {cones}")
    return relabeled


def _pick(arcs: list[ArcInstance]) -> ArcInstance:
    best = arcs[0].length
    tied = [a for a in arcs if a.length <= best + DOMAIN_TOL]
    return min(tied, key=lambda a: a.label)


def greedy_chain(h: Holonomy, catalog: ArcCatalog) -> ChainSpec:
    """Shortest arc, then shortest extensions at the free end."""
    arcs: list[ArcInstance] = []
    cones: list[int] = []
    first = _pick(catalog.all())
    arcs.append(first)
    cones = [first.label.j, first.label.k]
    second_pool = _competitors(catalog, arcs, cones)
    if not second_pool:
        raise CompletionError("No arc extends γ'1")
    second = _pick(second_pool)
    shared = cones[0] if cones[0] in second.endpoints else cones[1]
    cones = [first.other_end(shared), shared, second.other_end(shared)]
    arcs.append(second)
    for m in (3, 4):
        pool = _competitors(catalog, arcs, cones)
        if not pool:
            raise CompletionError(f"No arc extends the chain at ω{cones[-1]}")
        nxt = _pick(pool)
        arcs.append(nxt)
        cones.append(nxt.other_end(cones[-1]))
    return ChainSpec(tuple(cones), tuple(arcs))


def reduce(
    h: Holonomy,
    max_word: int | None = None,
    max_cross: int | None = None,
    max_iter: int | None = None,
    cfg: Config = DEFAULT_CONFIG,
    history: list[tuple[float, ...]] | None = None,
) -> Holonomy:
    """Remark h greedily until its standard chain satisfies every table inequality."""
    cfg = cfg.bounded(max_word=max_word, max_cross=max_cross, max_iter=max_iter)

    best: tuple[float, Holonomy] | None = None
    current = h
    for iteration in range(1, cfg.max_iter + 1):
        catalog = ArcCatalog(current, cfg)
        try:
            report = check(current, cfg, catalog)
        except Maskit2Error as e:
            logger.warning(f"reduce: check failed at iteration {iteration}: {e}")
            report = None
        if report is not None:
            if history is not None:
                history.append(tuple(catalog.necklace(i).length for i in range(1, 5)))
            if best is None or report.worst.value > best[0]:
                best = (report.worst.value, current)
            if report.in_domain:
                logger.info(f"reduce: in domain after {iteration - 1} remarkings")
                return current
        try:
            chain = greedy_chain(current, catalog)
            necklace = complete_necklace(current, chain, catalog)
            current = rebase(current, necklace)
        except Maskit2Error as e:
            raise ReductionFailure(
                f"Remarking failed at iteration {iteration}: {e}",
                best[1] if best else None,
            ) from e
    logger.warning(f"reduce: not in domain after {cfg.max_iter} iterations")
    raise ReductionFailure(
        f"No in-domain marking after {cfg.max_iter} iterations",
        best[1] if best else None,
    )


# Necessity


@dataclass(frozen=True)
class NecessityCensus:
    """Which table entries hold with equality on some in-domain certificate marking."""

    covered: dict[tuple[int, ArcLabel], tuple[str, ...]]
    markings: tuple[str, ...]

    @property
    def missing(self) -> frozenset[tuple[int, ArcLabel]]:
        entries = {(e.lhs, e.rhs) for e in theorem1_table()}
        return frozenset(entries - set(self.covered))

    def rows(self) -> list[list[str]]:
        out = [["group", "lhs", "rhs_label", "tight_on"]]
        for entry in theorem1_table():
            where = self.covered.get((entry.lhs, entry.rhs), ())
            out.append([str(entry.group), f"g{entry.lhs}", str(entry.rhs), " ".join(where)])
        return out


def certificate_markings() -> dict[str, Holonomy]:
    """Both certificate orbifolds with their mirrors and all six relabelings."""
    from .orbifold import exceptional, mirror, oct, rotate

    out: dict[str, Holonomy] = {}
    for name, h in (("oct", oct()[1]), ("exceptional", exceptional()[1])):
        for mirrored in (False, True):
            base = mirror(h) if mirrored else h
            for r in range(6):
                key = name + ("/mirror" if mirrored else "") + (f"/rot{r}" if r else "")
                out[key] = rotate(base, r)
    return out


def necessity_census(
    markings: dict[str, Holonomy] | None = None, cfg: Config = DEFAULT_CONFIG
) -> NecessityCensus:
    """Union of tight sets over the given markings.

    Markings outside the domain are first reduced; the result is another
    necklace of the same orbifold.
    """
    markings = certificate_markings() if markings is None else markings
    covered: dict[tuple[int, ArcLabel], list[str]] = {}
    used: list[str] = []
    for name, h in markings.items():
        try:
            report = check(h, cfg)
            if not report.in_domain:
                report = check(reduce(h, cfg=cfg), cfg)
        except Maskit2Error as e:
            logger.warning(f"census: skipping {name}: {e}")
            continue
        used.append(name)
        for key in report.tight:
            covered.setdefault(key, []).append(name)
    census = NecessityCensus({k: tuple(v) for k, v in covered.items()}, tuple(used))
    logger.info(
        f"census: {len(census.covered)} of {len(theorem1_table())} entries tight "
        f"on {len(used)} markings"
    )
    return census


__all__ = [
    "EXCEPTIONAL_TIGHT_SET",
    "OCT_TIGHT_SET",
    "ChainSpec",
    "InequalityEntry",
    "InequalityTable",
    "Margin",
    "MaskitReport",
    "MinimalityReport",
    "MinimalityStep",
    "NecessityCensus",
    "certificate_markings",
    "check",
    "complete_necklace",
    "greedy_chain",
    "necessity_census",
    "rebase",
    "reduce",
    "report_rows",
    "standard_chain",
    "theorem1_table",
    "verify_minimality",
]
