"""Report formatting for terminal and CSV output."""

import csv
import io
from collections.abc import Callable, Iterable, Sequence

from .maskit import MaskitReport, MinimalityReport, NecessityCensus, report_rows
from .models import PantsFoldParams

HUMAN_DIGITS = 12

# Text that is built once per process
_STATIC_TEXT: dict[str, str] = {}


def _get_static_text(key: str, generator: Callable[[], str]) -> str:
    """Get static text from cache or generate it."""
    if key not in _STATIC_TEXT:
        _STATIC_TEXT[key] = generator()
    return _STATIC_TEXT[key]


def fmt(value: float, digits: int = HUMAN_DIGITS) -> str:
    return f"{value:.{digits}g}"


def to_csv(rows: Iterable[Sequence[str]]) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerows(rows)
    return out.getvalue()


def format_report_csv(report: MaskitReport) -> str:
    """One row per inequality plus the in_domain summary row."""
    return to_csv(report_rows(report))


def format_length_table(report: MaskitReport, necklace: Sequence[float]) -> str:
    """The necklace lengths followed by the 27 compared lengths."""
    lines = ["arc\tlength"]
    for i, length in enumerate(necklace, start=1):
        lines.append(f"γ{i}\t{fmt(length)}")
    lines.append("")
    lines.append("group\tinequality\trhs_length")
    for m in report.margins:
        lines.append(f"{m.entry.group}\t{m.entry}\t{fmt(m.rhs_length)}")
    return "\n".join(lines) + "\n"


def format_minimality(report: MinimalityReport) -> str:
    lines = [f"bounds: max_word={report.max_word} max_cross={report.max_cross}"]
    for step in report.steps:
        witness = step.witness.label.display() if step.witness is not None else "-"
        lines.append(
            f"m={step.m}\tγ{step.m}={fmt(step.chain_length)}\t"
            f"competitors={step.competitors}\twitness={witness}\tmargin={fmt(step.margin)}"
        )
    verdict = "minimal" if report.minimal else "NOT minimal"
    lines.append(f"{verdict} (worst margin {fmt(report.worst)})")
    return "\n".join(lines) + "\n"


def format_census(census: NecessityCensus) -> str:
    """Each table entry with the markings on which it is an equality."""
    return to_csv(census.rows())


def format_params(params: PantsFoldParams) -> str:
    names = ("a1", "a3", "a5", "t1", "t3", "t5")
    return " ".join(f"{n}={fmt(v)}" for n, v in zip(names, params.as_tuple()))


def format_bounds_note() -> str:
    """Note printed with minimality results (cached)."""

    def generate() -> str:
        return (
            "Competitor search is exhaustive only up to the configured word and "
            "crossing bounds."
        )

    return _get_static_text("bounds_note", generate)
