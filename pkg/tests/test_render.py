"""Tests for SVG rendering."""

import lxml.etree

from src.models import ArcLabel
from src.render import NAMESPACE, render_svg


def _parse(data: bytes):
    return lxml.etree.fromstring(data)


class TestRenderSvg:
    """Tests for render_svg()."""

    def test_is_svg_document(self, oct_marking):
        data = render_svg(oct_marking)
        assert data.startswith(b"<?xml")
        assert _parse(data).tag == NAMESPACE + "svg"

    def test_necklace_only(self, oct_marking):
        root = _parse(render_svg(oct_marking))
        paths = root.findall(f".//{NAMESPACE}path")
        assert len(paths) == 6
        assert [p.get("data-label") for p in paths] == [f"g{i}" for i in range(1, 7)]
        assert {p.get("stroke-width") for p in paths} == {"4.0"}

    def test_labeled_arcs(self, oct_marking, oct_catalog):
        arcs = [oct_catalog.label(ArcLabel.parse(t)) for t in ("b13", "B34^6")]
        root = _parse(render_svg(oct_marking, arcs))
        assert len(root.findall(f".//{NAMESPACE}path")) == 8
        drawn = root.find(f"{NAMESPACE}g[@id='arcs']")
        assert [p.get("data-label") for p in drawn] == ["b13", "B34^6"]

    def test_two_tiles_and_six_cones(self, random_marking):
        root = _parse(render_svg(random_marking))
        assert len(root.findall(f".//{NAMESPACE}polygon")) == 2
        texts = [t.text for t in root.findall(f".//{NAMESPACE}text")]
        assert texts == [f"ω{k}" for k in range(1, 7)]

    def test_output_is_deterministic(self, oct_marking):
        assert render_svg(oct_marking) == render_svg(oct_marking)
