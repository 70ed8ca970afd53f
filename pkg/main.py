#!/usr/bin/env python3
"""
maskit2 - marked genus-2 orbifolds, their Maskit domain and bracelet checks.

Usage:
    python main.py oct --out oct.orb
    python main.py check --in oct.orb
    python main.py census --out census.csv
    python main.py verify-lemmas --count 500 --seed 1 --workers 8
"""

import argparse
import logging
import sys
from pathlib import Path

from src.config import Config
from src.errors import (
    ConstructionFailure,
    InvalidNecklace,
    InvalidParams,
    InvalidQuery,
    Maskit2Error,
    ParseError,
)
from src.formatter import (
    format_bounds_note,
    format_census,
    format_length_table,
    format_minimality,
    format_params,
    format_report_csv,
)
from src.maskit import check, necessity_census, reduce, verify_minimality
from src.models import ArcLabel, Holonomy
from src.orbifile import OrbifoldFile, load_orbifold, save_orbifold, serialize_orbifold
from src.orbifold import build, exceptional, oct, random_params
from src.render import render_svg
from src.tessellation import ArcCatalog
from src.verify import SampleConfig, run_samples, sample_rng, summary_csv

logger = logging.getLogger(__name__)

RANDOM_ATTEMPTS = 100
FILE_COMMANDS = ("lengths", "check", "minimality", "reduce", "render")


def parse_args(argv: list[str] | None = None) -> argparse.Namespace:
    """Parse command line arguments."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", type=Path, help="Output file (default: stdout)")
    common.add_argument("--seed", type=int, default=0, help="Random seed")
    common.add_argument("--max-word", type=int, help="Developing word bound")
    common.add_argument("--max-cross", type=int, help="Crossing bound")
    common.add_argument("--tol", type=float, help="Domain tolerance")
    common.add_argument("--count", type=int, default=100, help="Number of samples")
    common.add_argument("--workers", type=int, help="Worker threads for sampling")
    common.add_argument(
        "--log-level",
        default="WARNING",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="Logging level (default: WARNING)",
    )

    parser = argparse.ArgumentParser(
        description="Marked genus-2 hyperbolic orbifolds and the Maskit domain",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
    python main.py oct --out oct.orb             Octahedral orbifold
    python main.py check --in oct.orb            27 inequalities as CSV
    python main.py render --in oct.orb --labels b13,B36
        """,
    )
    commands = parser.add_subparsers(dest="command", required=True)
    for name in ("oct", "exceptional", "random", "census", "verify-lemmas"):
        commands.add_parser(name, parents=[common])
    for name in FILE_COMMANDS:
        sub = commands.add_parser(name, parents=[common])
        sub.add_argument("--in", dest="input", type=Path, required=True)
    commands.choices["verify-lemmas"].add_argument(
        "--variants",
        action="store_true",
        help="Also check the relabeled bracelets",
    )
    commands.choices["render"].add_argument(
        "--labels", default="", help="Comma-separated arc labels, e.g. b13,B34^6"
    )
    return parser.parse_args(argv)


def _emit(payload: str | bytes, out: Path | None) -> None:
    if out is not None:
        out.parent.mkdir(parents=True, exist_ok=True)
        if isinstance(payload, bytes):
            out.write_bytes(payload)
        else:
            out.write_text(payload, encoding="utf-8")
        logger.info(f"Wrote {out}")
    elif isinstance(payload, bytes):
        sys.stdout.buffer.write(payload)
    else:
        sys.stdout.write(payload)


def _emit_document(doc: OrbifoldFile, out: Path | None) -> None:
    if doc.params is not None:
        logger.info(f"Parameters: {format_params(doc.params)}")
    if out is not None:
        save_orbifold(out, doc)
    else:
        sys.stdout.write(serialize_orbifold(doc))


def _random_document(seed: int, config: Config) -> OrbifoldFile:
    rng = sample_rng(seed, 0)
    for attempt in range(RANDOM_ATTEMPTS):
        params = random_params(rng, config)
        try:
            build(params, config)
        except (InvalidNecklace, InvalidParams) as e:
            logger.debug(f"Draw {attempt} rejected: {e}")
            continue
        return OrbifoldFile(params=params)
    raise ConstructionFailure(f"No valid necklace in {RANDOM_ATTEMPTS} draws")


def _load(args: argparse.Namespace) -> Holonomy:
    return load_orbifold(args.input).holonomy()


def run(args: argparse.Namespace, config: Config) -> int:
    """Execute one command; returns the process status."""
    if args.command == "oct":
        _emit_document(OrbifoldFile(params=oct()[0]), args.out)
        return 0
    if args.command == "exceptional":
        _emit_document(OrbifoldFile(params=exceptional()[0]), args.out)
        return 0
    if args.command == "random":
        _emit_document(_random_document(args.seed, config), args.out)
        return 0

    if args.command == "census":
        census = necessity_census(cfg=config)
        _emit(format_census(census), args.out)
        for key in sorted(census.missing):
            logger.warning(f"census: γ{key[0]} <= {key[1].display()} is never tight")
        return 0

    if args.command == "verify-lemmas":
        sample_cfg = SampleConfig(
            count=args.count,
            seed=args.seed,
            max_word=config.max_word,
            max_cross=config.max_cross,
            workers=config.workers,
            variants=args.variants,
        )
        summary = run_samples(sample_cfg, config)
        _emit(summary_csv(summary), args.out)
        for problem in summary.problems():
            logger.error(f"verify-lemmas: {problem}")
        return 0 if summary.ok else 1

    h = _load(args)
    catalog = ArcCatalog(h, config)

    if args.command == "lengths":
        report = check(h, config, catalog)
        necklace = [catalog.necklace(i).length for i in range(1, 7)]
        _emit(format_length_table(report, necklace), args.out)
        return 0
    if args.command == "check":
        report = check(h, config, catalog)
        _emit(format_report_csv(report), args.out)
        if not report.in_domain:
            logger.error(f"Not in the Maskit domain: {report.worst.entry}")
        return 0 if report.in_domain else 1
    if args.command == "minimality":
        minimality = verify_minimality(h, cfg=config, catalog=catalog)
        _emit(format_minimality(minimality) + format_bounds_note() + "\n", args.out)
        return 0 if minimality.minimal else 1
    if args.command == "reduce":
        reduced = reduce(h, cfg=config)
        _emit_document(OrbifoldFile.from_holonomy(reduced), args.out)
        return 0
    if args.command == "render":
        labels = [ArcLabel.parse(s) for s in args.labels.split(",") if s.strip()]
        _emit(render_svg(h, [catalog.label(label) for label in labels]), args.out)
        return 0
    raise AssertionError(f"Unhandled command {args.command}")


def main(argv: list[str] | None = None) -> int:
    """Main entry point."""
    try:
        args = parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    try:
        config = Config.from_args(args)
    except ValueError as e:
        print(f"Configuration error: {e}", file=sys.stderr)
        return 2

    config.setup_logging()
    logger.info(f"maskit2 {args.command} starting")

    try:
        return run(args, config)
    except (ParseError, InvalidQuery) as e:
        logger.error(f"Invalid input: {e}")
        return 2
    except Maskit2Error as e:
        logger.error(f"{type(e).__name__}: {e}")
        return 3
    except (ValueError, OSError) as e:
        logger.error(str(e))
        return 2


if __name__ == "__main__":
    sys.exit(main())
