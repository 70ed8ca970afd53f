"""Text documents describing an orbifold by parameters or raw matrices.

::

    # comment
    format=maskit2/1
    kind=params
    a1=1.5285709194540...
    ...

or ``kind=matrices`` with ``R1=m00,m01,m10,m11`` through ``R6``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ParseError
from .hyperbolic import Isometry
from .models import Holonomy, PantsFoldParams
from .orbifold import build

logger = logging.getLogger(__name__)

FORMAT = "maskit2/1"
PARAM_KEYS = ("a1", "a3", "a5", "t1", "t3", "t5")
MATRIX_KEYS = tuple(f"R{i}" for i in range(1, 7))


@dataclass(frozen=True)
class OrbifoldFile:
    """Either pants-and-fold parameters or six half-turn matrices."""

    params: PantsFoldParams | None = None
    matrices: tuple[tuple[float, float, float, float], ...] | None = None

    def __post_init__(self):
        if (self.params is None) == (self.matrices is None):
            raise ValueError("An orbifold document holds exactly one of params, matrices")

    @property
    def kind(self) -> str:
        return "params" if self.params is not None else "matrices"

    @classmethod
    def from_holonomy(cls, h: Holonomy) -> OrbifoldFile:
        return cls(matrices=tuple(tuple(float(x) for x in r.m.flat) for r in h.R))

    def holonomy(self) -> Holonomy:
        if self.params is not None:
            return build(self.params)
        return Holonomy.from_matrices([np.array(m).reshape(2, 2) for m in self.matrices])


def _number(text: str, line: int) -> float:
    try:
        value = float(text)
    except ValueError:
        raise ParseError(f"Not a number: {text!r}", line) from None
    if not math.isfinite(value):
        raise ParseError(f"Value must be finite: {text!r}", line)
    return value


def _fmt(value: float) -> str:
    return f"{value:.17g}"


def parse_orbifold(text: str) -> OrbifoldFile:
    """Parse a document; unknown, duplicate or missing keys are errors."""
    values: dict[str, tuple[str, int]] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ParseError(f"Expected key=value, got {line!r}", number)
        key, value = (part.strip() for part in line.split("=", 1))
        if key in values:
            raise ParseError(f"Duplicate key {key!r}", number)
        if key not in ("format", "kind") + PARAM_KEYS + MATRIX_KEYS:
            raise ParseError(f"Unknown key {key!r}", number)
        values[key] = (value, number)

    if "format" not in values:
        raise ParseError("Missing format line")
    fmt, line = values.pop("format")
    if fmt != FORMAT:
        raise ParseError(f"Unsupported format {fmt!r}", line)
    if "kind" not in values:
        raise ParseError("Missing kind line")
    kind, line = values.pop("kind")
    expected = {"params": PARAM_KEYS, "matrices": MATRIX_KEYS}.get(kind)
    if expected is None:
        raise ParseError(f"Unknown kind {kind!r}", line)
    for key, (_, line) in values.items():
        if key not in expected:
            raise ParseError(f"Key {key!r} does not belong to kind={kind}", line)
    for key in expected:
        if key not in values:
            raise ParseError(f"Missing key {key!r}")

    if kind == "params":
        numbers = {key: _number(*values[key]) for key in PARAM_KEYS}
        try:
            return OrbifoldFile(params=PantsFoldParams(**numbers))
        except ValueError as e:
            raise ParseError(str(e), values["a1"][1]) from e

    matrices = []
    for key in MATRIX_KEYS:
        text_value, line = values[key]
        entries = [_number(part.strip(), line) for part in text_value.split(",")]
        if len(entries) != 4:
            raise ParseError(f"{key} needs four entries, got {len(entries)}", line)
        try:
            Isometry(np.array(entries).reshape(2, 2))
        except ValueError as e:
            raise ParseError(f"{key}: {e}", line) from e
        matrices.append(tuple(entries))
    return OrbifoldFile(matrices=tuple(matrices))


def serialize_orbifold(doc: OrbifoldFile) -> str:
    lines = [f"format={FORMAT}", f"kind={doc.kind}"]
    if doc.params is not None:
        lines += [f"{key}={_fmt(v)}" for key, v in zip(PARAM_KEYS, doc.params.as_tuple())]
    else:
        for key, m in zip(MATRIX_KEYS, doc.matrices):
            lines.append(f"{key}=" + ",".join(_fmt(x) for x in m))
    return "\n".join(lines) + "\n"


def load_orbifold(path: Path | str) -> OrbifoldFile:
    path = Path(path)
    logger.debug(f"Reading orbifold from {path}")
    return parse_orbifold(path.read_text(encoding="utf-8"))


def save_orbifold(path: Path | str, doc: OrbifoldFile) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(serialize_orbifold(doc), encoding="utf-8")
    logger.info(f"Wrote {doc.kind} orbifold to {path}")
