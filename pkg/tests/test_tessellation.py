"""Tests for tile walking, arc realization and enumeration."""

import math

import numpy as np
import pytest

from src.errors import InvalidQuery
from src.hyperbolic import (
    Point,
    Segment,
    angle_at,
    coincide,
    distance,
    half_turn,
    orientation,
    translation_length,
)
from src.models import ArcLabel, Side
from src.orbifold import OCT_EDGE, build, random_params
from src.tessellation import (
    ArcCatalog,
    adjacent,
    base_tile,
    crossing_count,
    develop_label,
    enumerate_arcs,
    hbar_base,
    locate_vertex,
    tiles_around,
    trace_segment,
    vertex_angle_sum,
)
from src.verify import sample_rng


class TestAdjacency:
    """Tests for the two-colored tessellation."""

    def test_side_six_neighbour_is_hbar_base(self, random_marking):
        neighbour = adjacent(random_marking, base_tile(random_marking), 6)
        assert neighbour.parity is Side.HBAR
        for p, q in zip(neighbour.vertices, hbar_base(random_marking).vertices):
            assert coincide(p, q, 1e-8)

    @pytest.mark.parametrize("i", range(1, 7))
    def test_crossing_back_returns(self, random_marking, i):
        start = base_tile(random_marking)
        back = adjacent(random_marking, adjacent(random_marking, start, i), i)
        assert back.parity is Side.H
        assert back.g.same_as(start.g, 1e-8)

    @pytest.mark.parametrize("i", range(1, 7))
    def test_parity_alternates(self, random_marking, i):
        for parity in (Side.H, Side.HBAR):
            t = base_tile(random_marking, parity)
            assert adjacent(random_marking, t, i).parity is parity.opposite

    @pytest.mark.parametrize("k", range(1, 7))
    def test_tiles_around_vertex(self, random_marking, k):
        tiles = tiles_around(random_marking, base_tile(random_marking), k)
        assert [t.parity for t in tiles] == [Side.H, Side.HBAR, Side.H, Side.HBAR]
        for t in tiles:
            assert coincide(t.vertex(k), random_marking.cone(k), 1e-8)

    @pytest.mark.parametrize("k", range(1, 7))
    def test_vertex_angle_sum(self, random_marking, oct_marking, k):
        for h in (random_marking, oct_marking):
            assert vertex_angle_sum(h, base_tile(h), k) == pytest.approx(
                2 * math.pi, abs=1e-8
            )


class TestDevelopLabel:
    """Tests for realizing labeled arcs."""

    @pytest.mark.parametrize("i", range(1, 7))
    def test_necklace_arcs(self, random_marking, i):
        arc = develop_label(random_marking, ArcLabel.necklace(i))
        assert arc.verified
        assert arc.length == pytest.approx(
            random_marking.necklace_lengths()[i - 1], abs=1e-12
        )

    def test_diagonal_length(self, oct_marking):
        arc = develop_label(oct_marking, ArcLabel.parse("b13"))
        assert arc.length == pytest.approx(
            distance(oct_marking.w[0], oct_marking.w[2]), abs=1e-12
        )
        assert arc.path == ()

    def test_hbar_necklace_label_resolves(self, oct_marking):
        arc = develop_label(oct_marking, ArcLabel.parse("B45"))
        assert arc.label == ArcLabel.necklace(4)

    def test_crossing_label_is_verified_on_oct(self, oct_marking):
        arc = develop_label(oct_marking, ArcLabel.parse("B34^6"))
        assert arc.verified
        assert arc.path == (6,)
        assert arc.length > OCT_EDGE

    def test_trace_segment(self, oct_marking):
        s = Segment(oct_marking.w[0], oct_marking.w[2])
        assert trace_segment(oct_marking, s) == (Side.H, ())

    def test_locate_vertex(self, oct_marking):
        tile, k = locate_vertex(oct_marking, oct_marking.w[3])
        assert k == 4
        assert coincide(tile.vertex(4), oct_marking.w[3])


class TestCrossingCount:
    """Tests for X(α, β)."""

    def test_necklace_against_label(self, oct_catalog):
        arc = oct_catalog.label(ArcLabel.parse("B34^6"))
        assert crossing_count(oct_catalog.necklace(6), arc) == 1
        assert crossing_count(oct_catalog.necklace(2), arc) == 0

    def test_necklace_arcs_are_disjoint(self, oct_catalog):
        assert crossing_count(oct_catalog.necklace(1), oct_catalog.necklace(3)) == 0

    def test_octahedron_diagonals_cross(self, oct_catalog):
        a = oct_catalog.label(ArcLabel.parse("b14"))
        b = oct_catalog.label(ArcLabel.parse("b25"))
        assert crossing_count(a, b) == 1

    def test_triangle_edges_disjoint(self, oct_catalog):
        a = oct_catalog.label(ArcLabel.parse("b13"))
        b = oct_catalog.label(ArcLabel.parse("b35"))
        assert crossing_count(a, b) == 0


class TestEnumeration:
    """Tests for bounded enumeration of simple arcs."""

    def test_same_endpoint_rejected(self, oct_marking):
        with pytest.raises(InvalidQuery):
            enumerate_arcs(oct_marking, 2, 2)

    def test_out_of_range_rejected(self, oct_marking):
        with pytest.raises(ValueError):
            enumerate_arcs(oct_marking, 1, 7)

    def test_sorted_by_length(self, oct_catalog):
        arcs = oct_catalog.between(1, 3)
        keys = [(a.length, a.label) for a in arcs]
        assert keys == sorted(keys)

    def test_shortest_adjacent_arc_is_necklace(self, oct_catalog):
        arcs = oct_catalog.between(1, 2)
        assert arcs[0].label == ArcLabel.necklace(1)
        assert arcs[0].length == pytest.approx(OCT_EDGE, abs=1e-9)

    def test_edges_are_shortest(self, oct_catalog):
        assert min(a.length for a in oct_catalog.all()) == pytest.approx(
            OCT_EDGE, abs=1e-9
        )
        edges = [a for a in oct_catalog.all() if a.length < OCT_EDGE + 1e-7]
        assert len(edges) == 12

    def test_arcs_are_simple_and_bounded(self, oct_catalog):
        for arc in oct_catalog.touching(3):
            assert arc.simple
            assert arc.crossing_count <= 3

    def test_enumeration_matches_labels(self, oct_catalog):
        for arc in oct_catalog.between(2, 5)[:5]:
            again = develop_label(oct_catalog.h, arc.label)
            assert again.length == pytest.approx(arc.length, abs=1e-9)

    def test_direct_query_agrees_with_catalog(self, oct_marking, oct_catalog):
        direct = enumerate_arcs(oct_marking, 4, 1)
        assert {a.label for a in direct} == {a.label for a in oct_catalog.between(1, 4)}


class TestArcCatalog:
    """Tests for the per-marking arc cache."""

    def test_pairs_are_unordered(self, oct_catalog):
        assert oct_catalog.between(3, 1) is oct_catalog.between(1, 3)

    def test_label_cache(self, oct_catalog):
        first = oct_catalog.label(ArcLabel.parse("b13"))
        assert oct_catalog.label(ArcLabel.parse("b13")) is first

    def test_same_endpoint_rejected(self, random_marking):
        with pytest.raises(InvalidQuery):
            ArcCatalog(random_marking).between(4, 4)


def _winding(t, x) -> float:
    """|Sum of signed angles| subtended by the sides of t at x: 2π inside, 0 outside."""
    total = 0.0
    for k in range(1, 7):
        a, b = t.vertex(k), t.vertex(k + 1)
        turn = angle_at(x, a, b)
        total += turn if orientation(x, a, b) > 0 else -turn
    return abs(total)


def _sampled_crossings(h, s, samples: int = 3000):
    """Start side and crossings found by stepping along s in the Klein chart."""
    pa, pb = np.array(s.p.klein()), np.array(s.q.klein())

    def at(f: float) -> Point:
        return Point.from_klein(*(pa + f * (pb - pa)))

    start, j = locate_vertex(h, s.p)
    first = at(1.0 / samples)
    current = max(tiles_around(h, start, j), key=lambda t: _winding(t, first))
    side = current.parity
    crossings = []
    for n in range(2, samples):
        x = at(n / samples)
        if _winding(current, x) > math.pi:
            continue
        options = [(_winding(adjacent(h, current, i), x), i) for i in range(1, 7)]
        best, i = max(options)
        assert best > math.pi
        current = adjacent(h, current, i)
        crossings.append(i)
    assert any(coincide(v, s.q, 1e-7) for v in current.vertices)
    return side, tuple(crossings)


def _trace_length(arc) -> float:
    """Half the translation length of the product of the endpoint half-turns."""
    return translation_length(half_turn(arc.start_lift) @ half_turn(arc.endpoint_lift)) / 2


class TestLengthOracle:
    """Arc lengths agree with the trace of the endpoint half-turn product."""

    def test_oct_catalog(self, oct_catalog):
        for arc in oct_catalog.all():
            assert arc.length == pytest.approx(_trace_length(arc), abs=1e-6)

    def test_random_marking(self, random_marking):
        for arc in ArcCatalog(random_marking).touching(1):
            assert arc.length == pytest.approx(_trace_length(arc), abs=1e-6)


class TestTraceAgainstSampling:
    """trace_segment agrees with a point-by-point walk along the segment."""

    def test_oct_arcs(self, oct_catalog):
        arcs = [a for a in oct_catalog.touching(1) if a.crossing_count <= 2][:12]
        assert arcs
        for arc in arcs:
            s = Segment(arc.start_lift, arc.endpoint_lift)
            assert trace_segment(oct_catalog.h, s) == _sampled_crossings(oct_catalog.h, s)


class TestThinPants:
    """Markings whose developed tiles sit far from the base chart."""

    @pytest.fixture(scope="class")
    def thin(self):
        params = random_params(sample_rng(3, 20))
        return build(params)

    def test_enumeration_completes(self, thin):
        arcs = enumerate_arcs(thin, 1, 3)
        assert arcs
        assert all(a.simple for a in arcs)
        keys = [(a.length, a.label) for a in arcs]
        assert keys == sorted(keys)

    def test_lengths_match_trace(self, thin):
        for arc in enumerate_arcs(thin, 1, 3):
            assert arc.length == pytest.approx(_trace_length(arc), rel=1e-6)

    def test_necklace_arcs(self, thin):
        catalog = ArcCatalog(thin)
        for i in range(1, 7):
            assert catalog.necklace(i).length == pytest.approx(
                thin.necklace_lengths()[i - 1], abs=1e-9
            )


@pytest.mark.slow
class TestRandomMarkings:
    """Structural invariants over fifty embedded random markings."""

    @pytest.fixture(scope="class")
    def markings(self, valid_markings):
        return [h for _, h in valid_markings(11, 50)]

    def test_vertex_angle_sums(self, markings):
        for h in markings:
            for parity in (Side.H, Side.HBAR):
                for k in range(1, 7):
                    total = vertex_angle_sum(h, base_tile(h, parity), k)
                    assert total == pytest.approx(2 * math.pi, abs=1e-8)

    def test_parity_and_return(self, markings):
        for h in markings:
            for parity in (Side.H, Side.HBAR):
                t = base_tile(h, parity)
                for i in range(1, 7):
                    u = adjacent(h, t, i)
                    assert u.parity is parity.opposite
                    assert adjacent(h, u, i).g.same_as(t.g, 1e-8)

    def test_enumeration_on_every_pair(self, markings):
        for h in markings:
            catalog = ArcCatalog(h)
            for j, k in ((1, 3), (2, 5), (4, 6)):
                arcs = catalog.between(j, k)
                assert arcs
                for arc in arcs[:6]:
                    assert arc.length == pytest.approx(_trace_length(arc), rel=1e-6)
