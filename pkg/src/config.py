"""Configuration management for maskit2."""

import argparse
import logging
from dataclasses import dataclass, replace

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Config:
    """Immutable numeric and search configuration."""

    domain_tol: float = 1e-9
    vertex_tol: float = 1e-6
    incidence_tol: float = 1e-10
    max_word: int = 8
    max_cross: int = 3
    max_iter: int = 20
    tile_budget: int = 64
    a_min: float = 0.3
    a_max: float = 2.5
    workers: int = 1
    log_level: str = "WARNING"

    def __post_init__(self):
        if self.max_word < 1 or self.max_cross < 0:
            raise ValueError("Enumeration bounds must be positive")
        if not 0 < self.a_min < self.a_max:
            raise ValueError("Admissible range must satisfy 0 < a_min < a_max")
        if min(self.domain_tol, self.vertex_tol, self.incidence_tol) <= 0:
            raise ValueError("Tolerances must be positive")

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "Config":
        """Build configuration from parsed command line flags."""
        overrides = {}
        if getattr(args, "tol", None) is not None:
            overrides["domain_tol"] = args.tol
        if getattr(args, "max_word", None) is not None:
            overrides["max_word"] = args.max_word
        if getattr(args, "max_cross", None) is not None:
            overrides["max_cross"] = args.max_cross
        if getattr(args, "workers", None) is not None:
            overrides["workers"] = args.workers
        if getattr(args, "log_level", None):
            overrides["log_level"] = args.log_level
        return replace(DEFAULT_CONFIG, **overrides)

    def bounded(self, **overrides) -> "Config":
        """Copy with the given non-None fields replaced."""
        changes = {k: v for k, v in overrides.items() if v is not None}
        return replace(self, **changes) if changes else self

    @property
    def depth(self) -> int:
        """Tile-walk depth used by arc enumeration."""
        return min(self.max_word, self.max_cross)

    def setup_logging(self) -> None:
        """Configure application logging."""
        logging.basicConfig(
            level=getattr(logging, self.log_level.upper()),
            format="%(asctime)s | %(levelname)-8s | %(name)s | %(message)s",
            datefmt="%Y-%m-%d %H:%M:%S",
        )


DEFAULT_CONFIG = Config()
