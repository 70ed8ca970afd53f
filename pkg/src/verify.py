"""Numerical checks of the length-4 bracelet results and the sampling harness."""

from __future__ import annotations

import csv
import hashlib
import io
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT_CONFIG, Config
from .errors import (
    DegenerateIncidence,
    InvalidBracelet,
    InvalidNecklace,
    InvalidParams,
    Maskit2Error,
    ReductionFailure,
)
from .maskit import check, reduce, verify_minimality
from .models import ArcInstance, ArcLabel, Holonomy, PantsFoldParams, Side, cyclic
from .orbifold import build, random_params
from .tessellation import ArcCatalog, crossing_count

logger = logging.getLogger(__name__)

STRICT_TOL = 1e-9
RIGIDITY_TRIGGER = 1e-6
RIGIDITY_TOL = 1e-5
MAX_BRACELET_SKIP = 0.2
FAILURE_STATUSES = ("unreduced", "error")


@dataclass(frozen=True)
class Bracelet4System:
    """A length-4 bracelet c_0..c_3 with interior cone points c_4, c_5.

    kappa[(k, l)] is the shortest arc c_k to c_l (l in 4, 5) crossing no
    bracelet side; lam[k] is the shortest c_4 to c_5 arc crossing only side k,
    once. Side k joins c_k and c_{k+1}.
    """

    cones: tuple[int, ...]
    sides: tuple[ArcInstance, ...]
    kappa: dict[tuple[int, int], ArcInstance] = field(hash=False)
    lam: tuple[ArcInstance, ...]

    def kappa_len(self, a: int, b: int) -> float:
        """ℓ(κ_{a,b}) for a side (b = a ± 1 mod 4) or an interior connection."""
        if b in (4, 5):
            return self.kappa[(a % 4, b)].length
        if a in (4, 5):
            return self.kappa[(b % 4, a)].length
        a, b = a % 4, b % 4
        if (a + 1) % 4 == b:
            return self.sides[a].length
        if (b + 1) % 4 == a:
            return self.sides[b].length
        raise ValueError(f"κ_{a},{b} joins opposite bracelet points")

    def lam_len(self, k: int) -> float:
        return self.lam[k % 4].length

    def all_kappa(self) -> tuple[float, ...]:
        sides = tuple(s.length for s in self.sides)
        return sides + tuple(self.kappa[key].length for key in sorted(self.kappa))


def bracelet_labels(
    shift: int = 0, mirrored: bool = False
) -> tuple[tuple[int, ...], tuple[ArcLabel, ...]]:
    """Cone assignment and side labels of the canonical bracelet, rotated by shift."""
    c = tuple(cyclic(i + shift) for i in (1, 2, 4, 5, 3, 6))
    across, around = (Side.H, Side.HBAR) if mirrored else (Side.HBAR, Side.H)

    def arc(a: int, b: int, side: Side) -> ArcLabel:
        lo, hi = sorted((a, b))
        return ArcLabel(lo, hi, side).canonical()

    sides = (
        arc(c[0], c[1], Side.H),
        arc(c[1], c[2], across),
        arc(c[2], c[3], Side.H),
        arc(c[3], c[0], around),
    )
    return c, sides


def _profile(arc: ArcInstance, sides: tuple[ArcInstance, ...]) -> tuple[int, ...] | None:
    try:
        return tuple(crossing_count(arc, s) for s in sides)
    except DegenerateIncidence:
        return None


def extract_bracelet4(
    h: Holonomy,
    cfg: Config = DEFAULT_CONFIG,
    catalog: ArcCatalog | None = None,
    shift: int = 0,
    mirrored: bool = False,
) -> Bracelet4System:
    """Realize the canonical bracelet and its interior connections on h."""
    catalog = catalog or ArcCatalog(h, cfg)
    cones, labels = bracelet_labels(shift, mirrored)
    sides = tuple(catalog.label(label) for label in labels)
    for label, s in zip(labels, sides):
        if not s.verified:
            raise InvalidBracelet(f"Side {label.display()} is not a verified geodesic")
    for a, b in ((0, 2), (1, 3), (0, 1), (1, 2), (2, 3), (3, 0)):
        if _profile(sides[a], (sides[b],)) != (0,):
            raise InvalidBracelet(f"Bracelet sides {a} and {b} cross")

    kappa: dict[tuple[int, int], ArcInstance] = {}
    for k in range(4):
        for c in (4, 5):
            pool = catalog.between(cones[k], cones[c])
            clean = [a for a in pool if _profile(a, sides) == (0,) * 4]
            if not clean:
                raise InvalidBracelet(f"No arc c{k} to c{c} avoids the bracelet")
            kappa[(k, c)] = clean[0]

    interior = catalog.between(cones[4], cones[5])
    if any(_profile(a, sides) == (0,) * 4 for a in interior):
        raise InvalidBracelet("c4 and c5 lie in the same complementary component")
    lam = []
    for k in range(4):
        wanted = tuple(1 if n == k else 0 for n in range(4))
        hits = [a for a in interior if _profile(a, sides) == wanted]
        if not hits:
            raise InvalidBracelet(f"No arc c4 to c5 crosses only side {k}")
        lam.append(hits[0])
    return Bracelet4System(cones, sides, kappa, tuple(lam))


@dataclass(frozen=True)
class LemmaResult:
    name: str
    applicable: bool
    passed: bool
    margins: tuple[float, ...] = ()


def check_cp2(b: Bracelet4System, tol: float = STRICT_TOL) -> LemmaResult:
    """2ℓ(κ_{0,4}) < ℓ(λ_0) + ℓ(λ_3) and 2ℓ(κ_{3,0}) < ℓ(λ_0) + ℓ(λ_2)."""
    first = b.lam_len(0) + b.lam_len(3) - 2.0 * b.kappa_len(0, 4)
    second = b.lam_len(0) + b.lam_len(2) - 2.0 * b.kappa_len(3, 0)
    return LemmaResult("cp2", True, first > tol and second > tol, (first, second))


def check_tri(b: Bracelet4System, tol: float = STRICT_TOL) -> LemmaResult:
    """No strictly satisfied triple κ_{3,4} < κ_{0,4}, κ_{3,5} < κ_{0,5}, λ_0 < λ_2."""
    margins = (
        b.kappa_len(0, 4) - b.kappa_len(3, 4),
        b.kappa_len(0, 5) - b.kappa_len(3, 5),
        b.lam_len(2) - b.lam_len(0),
    )
    violated = all(m > tol for m in margins)
    return LemmaResult("tri", True, not violated, margins)


def check_obvious(b: Bracelet4System, tol: float = STRICT_TOL) -> LemmaResult:
    hypotheses = (
        b.kappa_len(3, 4) <= b.kappa_len(0, 4) + tol,
        b.kappa_len(3, 5) <= b.kappa_len(0, 5) + tol,
        b.kappa_len(1, 4) <= b.kappa_len(2, 4) + tol,
    )
    margin = b.kappa_len(1, 5) - b.kappa_len(2, 5)
    if not all(hypotheses):
        return LemmaResult("obvious", False, True, (margin,))
    return LemmaResult("obvious", True, margin >= -tol, (margin,))


def _angle_hypotheses(b: Bracelet4System, tol: float) -> bool:
    for c in (4, 5):
        if b.kappa_len(2, 3) > b.kappa_len(2, c) + tol:
            return False
        if b.kappa_len(1, 2) > min(b.kappa_len(0, c), b.kappa_len(1, c)) + tol:
            return False
        if b.kappa_len(0, 1) > min(b.kappa_len(0, c), b.kappa_len(3, c)) + tol:
            return False
    return True


def check_angle(b: Bracelet4System, tol: float = STRICT_TOL) -> LemmaResult:
    """Corollary form ℓ(κ_{3,0}) ≥ ℓ(κ_{1,2}), plus rigidity near equality.

    Margins are (corollary margin, spread of all twelve κ lengths).
    """
    margin = b.kappa_len(3, 0) - b.kappa_len(1, 2)
    lengths = b.all_kappa()
    spread = max(lengths) - min(lengths)
    if not _angle_hypotheses(b, tol):
        return LemmaResult("angle", False, True, (margin, spread))
    passed = margin >= -tol
    if margin <= RIGIDITY_TRIGGER:
        passed = passed and spread <= RIGIDITY_TOL
    return LemmaResult("angle", True, passed, (margin, spread))


def lemma_checks(b: Bracelet4System) -> tuple[LemmaResult, ...]:
    return (check_cp2(b), check_tri(b), check_obvious(b), check_angle(b))


# Sampling


@dataclass(frozen=True)
class SampleConfig:
    count: int = 100
    seed: int = 0
    a_min: float = DEFAULT_CONFIG.a_min
    a_max: float = DEFAULT_CONFIG.a_max
    max_word: int = DEFAULT_CONFIG.max_word
    max_cross: int = DEFAULT_CONFIG.max_cross
    workers: int = 1
    variants: bool = False

    def __post_init__(self):
        if self.count < 1:
            raise ValueError("count must be at least 1")
        if not DEFAULT_CONFIG.a_min <= self.a_min < self.a_max <= DEFAULT_CONFIG.a_max:
            raise ValueError(f"Parameter range [{self.a_min}, {self.a_max}] is not admissible")

    def numeric(self, base: Config = DEFAULT_CONFIG) -> Config:
        return base.bounded(
            a_min=self.a_min, a_max=self.a_max, max_word=self.max_word, max_cross=self.max_cross
        )


@dataclass(frozen=True)
class SampleResult:
    index: int
    params: PantsFoldParams | None
    status: str
    in_domain: bool | None = None
    minimal: bool | None = None
    worst_min_margin: float | None = None
    cp2: tuple[float, float] | None = None
    tri_ok: bool | None = None
    obvious_ok: bool | None = None
    angle_ok: bool | None = None

    @property
    def violations(self) -> int:
        count = 0
        if self.in_domain and self.minimal is False:
            count += 1
        if self.cp2 is not None and min(self.cp2) <= STRICT_TOL:
            count += 1
        count += sum(1 for ok in (self.tri_ok, self.obvious_ok, self.angle_ok) if ok is False)
        return count


@dataclass(frozen=True)
class SampleSummary:
    config: SampleConfig
    results: tuple[SampleResult, ...]

    def count(self, status: str) -> int:
        return sum(1 for r in self.results if r.status == status)

    @property
    def violations(self) -> int:
        return sum(r.violations for r in self.results)

    @property
    def failures(self) -> int:
        """Samples that never reached the lemma checks through a numeric failure."""
        return sum(1 for r in self.results if r.status in FAILURE_STATUSES)

    @property
    def bracelet_skip_ratio(self) -> float:
        """Bracelet skips as a share of the samples with an embedded necklace."""
        eligible = len(self.results) - self.count("skipped-necklace")
        if eligible == 0:
            return 0.0
        return self.count("skipped-bracelet") / eligible

    def problems(self) -> list[str]:
        """Reasons the run does not support the lemmas; empty when it does."""
        out = []
        if self.violations:
            out.append(f"{self.violations} lemma violations")
        if self.failures:
            out.append(f"{self.failures} samples unreduced or failed numerically")
        if self.bracelet_skip_ratio > MAX_BRACELET_SKIP:
            out.append(
                f"bracelet skipped on {self.bracelet_skip_ratio:.0%} of samples, "
                f"limit {MAX_BRACELET_SKIP:.0%}"
            )
        if self.count("ok") == 0:
            out.append("no sample reached the lemma checks")
        return out

    @property
    def ok(self) -> bool:
        return not self.problems()


def sample_rng(seed: int, index: int) -> np.random.Generator:
    """Generator for one sample, independent of scheduling."""
    digest = hashlib.sha256(f"{seed}-{index}".encode()).hexdigest()[:16]
    return np.random.default_rng(int(digest, 16))


def _bracelet_results(h: Holonomy, cfg: Config, catalog: ArcCatalog, variants: bool):
    """Lemma results over the canonical bracelet and optionally its relabelings."""
    shifts = range(6) if variants else (0,)
    mirrors = (False, True) if variants else (False,)
    systems = []
    for shift in shifts:
        for mirrored in mirrors:
            try:
                systems.append(extract_bracelet4(h, cfg, catalog, shift, mirrored))
            except InvalidBracelet as e:
                if shift == 0 and not mirrored:
                    raise
                logger.debug(f"Bracelet variant ({shift}, {mirrored}) skipped: {e}")
    return [lemma_checks(b) for b in systems]


def run_sample(index: int, sample_cfg: SampleConfig, base: Config = DEFAULT_CONFIG) -> SampleResult:
    cfg = sample_cfg.numeric(base)
    params = random_params(sample_rng(sample_cfg.seed, index), cfg)
    try:
        h = build(params, cfg)
    except (InvalidNecklace, InvalidParams) as e:
        logger.debug(f"Sample {index}: skipped draw ({e})")
        return SampleResult(index, params, "skipped-necklace")
    try:
        h = reduce(h, cfg=cfg)
    except ReductionFailure as e:
        logger.warning(f"Sample {index}: {e}")
        return SampleResult(index, params, "unreduced")
    try:
        catalog = ArcCatalog(h, cfg)
        report = check(h, cfg, catalog)
        minimality = verify_minimality(h, cfg=cfg, catalog=catalog)
    except Maskit2Error as e:
        logger.warning(f"Sample {index}: numeric failure {e}")
        return SampleResult(index, params, "error")
    try:
        checks = _bracelet_results(h, cfg, catalog, sample_cfg.variants)
    except InvalidBracelet as e:
        logger.debug(f"Sample {index}: bracelet skipped ({e})")
        return SampleResult(
            index,
            params,
            "skipped-bracelet",
            report.in_domain,
            minimality.minimal,
            minimality.worst,
        )
    except Maskit2Error as e:
        logger.warning(f"Sample {index}: numeric failure {e}")
        return SampleResult(
            index, params, "error", report.in_domain, minimality.minimal, minimality.worst
        )

    cp2 = (min(c[0].margins[0] for c in checks), min(c[0].margins[1] for c in checks))
    return SampleResult(
        index,
        params,
        "ok",
        report.in_domain,
        minimality.minimal,
        minimality.worst,
        cp2,
        all(c[1].passed for c in checks),
        all(c[2].passed for c in checks),
        all(c[3].passed for c in checks),
    )


def run_samples(sample_cfg: SampleConfig, base: Config = DEFAULT_CONFIG) -> SampleSummary:
    """Run every sample; results are ordered by index whatever the worker count."""
    indices = range(sample_cfg.count)
    if sample_cfg.workers > 1:
        with ThreadPoolExecutor(max_workers=sample_cfg.workers) as executor:
            results = list(executor.map(lambda i: run_sample(i, sample_cfg, base), indices))
    else:
        results = [run_sample(i, sample_cfg, base) for i in indices]
    summary = SampleSummary(sample_cfg, tuple(results))
    logger.info(
        f"Samples: {len(results)} run, {summary.count('ok')} checked, "
        f"{summary.count('skipped-necklace')} necklace skips, "
        f"{summary.count('skipped-bracelet')} bracelet skips, {summary.failures} failures, "
        f"{summary.violations} violations"
    )
    return summary


SUMMARY_HEADER = [
    "seed_index",
    "a1",
    "a3",
    "a5",
    "t1",
    "t3",
    "t5",
    "in_domain",
    "worst_min_margin",
    "cp2_i",
    "cp2_ii",
    "tri_ok",
    "obvious_ok",
    "angle_ok",
    "status",
]


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def summary_csv(summary: SampleSummary) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(SUMMARY_HEADER)
    for r in summary.results:
        params = r.params.as_tuple() if r.params is not None else (None,) * 6
        cp2 = r.cp2 or (None, None)
        writer.writerow(
            [_cell(v) for v in (r.index, *params, r.in_domain, r.worst_min_margin, *cp2)]
            + [_cell(r.tri_ok), _cell(r.obvious_ok), _cell(r.angle_ok), r.status]
        )
    return out.getvalue()
