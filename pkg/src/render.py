"""SVG wireframes of a marking in the Klein disk."""

from __future__ import annotations

import logging
from collections.abc import Iterable

import lxml.etree

from .models import ArcInstance, Holonomy
from .tessellation import base_tile, hbar_base

logger = logging.getLogger(__name__)

SVG_NS = "http://www.w3.org/2000/svg"
NAMESPACE = "{" + SVG_NS + "}"
SIZE = 600
MARGIN = 20
NECKLACE_WIDTH = 4.0
ARC_WIDTH = 3.0


def _xy(point) -> tuple[float, float]:
    u, v = point.klein()
    radius = SIZE / 2 - MARGIN
    return SIZE / 2 + radius * u, SIZE / 2 - radius * v


def _coord(value: float) -> str:
    return f"{value:.4f}"


def _polygon(parent, points, **attrs) -> None:
    text = " ".join(f"{_coord(x)},{_coord(y)}" for x, y in map(_xy, points))
    lxml.etree.SubElement(parent, NAMESPACE + "polygon", points=text, **attrs)


def _path(parent, p, q, **attrs) -> None:
    (x1, y1), (x2, y2) = _xy(p), _xy(q)
    d = f"M {_coord(x1)} {_coord(y1)} L {_coord(x2)} {_coord(y2)}"
    lxml.etree.SubElement(parent, NAMESPACE + "path", d=d, **attrs)


def render_svg(h: Holonomy, arcs: Iterable[ArcInstance] = ()) -> bytes:
    """Base tiles, the necklace (thick black) and the given arcs (thick grey)."""
    root = lxml.etree.Element(
        NAMESPACE + "svg",
        nsmap={None: SVG_NS},
        width=str(SIZE),
        height=str(SIZE),
        viewBox=f"0 0 {SIZE} {SIZE}",
    )
    lxml.etree.SubElement(
        root,
        NAMESPACE + "circle",
        cx=str(SIZE // 2),
        cy=str(SIZE // 2),
        r=str(SIZE // 2 - MARGIN),
        fill="none",
        stroke="black",
    )
    tiles = lxml.etree.SubElement(root, NAMESPACE + "g", id="tiles")
    _polygon(tiles, h.w, fill="#f4f4f4", stroke="#999999")
    _polygon(tiles, hbar_base(h).vertices, fill="#dde6f0", stroke="#999999")

    necklace = lxml.etree.SubElement(root, NAMESPACE + "g", id="necklace")
    tile = base_tile(h)
    for i in range(1, 7):
        side = tile.side(i)
        _path(necklace, side.p, side.q, stroke="black", fill="none")
        necklace[-1].set("stroke-width", str(NECKLACE_WIDTH))
        necklace[-1].set("data-label", f"g{i}")

    drawn = lxml.etree.SubElement(root, NAMESPACE + "g", id="arcs")
    for arc in arcs:
        _path(
            drawn, arc.start_lift, arc.endpoint_lift, stroke="#808080", fill="none"
        )
        drawn[-1].set("stroke-width", str(ARC_WIDTH))
        drawn[-1].set("data-label", str(arc.label))

    labels = lxml.etree.SubElement(root, NAMESPACE + "g", id="cones")
    for k, point in enumerate(h.w, start=1):
        x, y = _xy(point)
        text = lxml.etree.SubElement(
            labels, NAMESPACE + "text", x=_coord(x + 6), y=_coord(y - 6)
        )
        text.set("font-size", "14")
        text.text = f"ω{k}"

    logger.debug(f"Rendered {len(drawn)} arcs")
    return lxml.etree.tostring(
        root, pretty_print=True, xml_declaration=True, encoding="UTF-8"
    )
