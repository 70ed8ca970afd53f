"""Tests for marked-orbifold construction and the certificate orbifolds."""

import math
from dataclasses import replace

import numpy as np
import pytest

from src.errors import InvalidParams, Maskit2Error
from src.hyperbolic import Isometry, coincide, rotation, translation, translation_length
from src.maskit import EXCEPTIONAL_TIGHT_SET, check, theorem1_table, verify_minimality
from src.models import ArcLabel, PantsFoldParams
from src.orbifold import (
    OCT_EDGE,
    boundary_holonomies,
    build,
    conjugate,
    exceptional,
    exceptional_residuals,
    mirror,
    oct,
    random_params,
    rotate,
    seam_lengths,
)
from src.tessellation import develop_label

OCT_EDGE_LABELS = ("b13", "b35", "b15", "B24", "B46", "B26")
DIAGONALS = [(1, 3), (1, 4), (1, 5), (2, 4), (2, 5), (2, 6), (3, 5), (3, 6), (4, 6)]


class TestBoundaryHolonomies:
    """Tests for the pants boundary holonomy."""

    def test_seams_are_positive(self):
        s13, s51 = seam_lengths(1.0, 1.3, 0.8)
        assert s13 > 0 and s51 > 0

    def test_product_is_identity(self):
        x1, x3, x5 = boundary_holonomies(PantsFoldParams(1.1, 0.7, 1.9))
        assert (x1 @ x3 @ x5).is_identity(1e-8)

    def test_translation_lengths(self):
        params = PantsFoldParams(1.1, 0.7, 1.9)
        xs = boundary_holonomies(params)
        for x, a in zip(xs, params.lengths):
            assert translation_length(x) == pytest.approx(2 * a, rel=1e-9)


class TestBuild:
    """Tests for build()."""

    def test_necklace_lengths_match_parameters(self, random_params_valid, random_marking):
        g = random_marking.necklace_lengths()
        assert g[0] == pytest.approx(random_params_valid.a1, abs=1e-9)
        assert g[2] == pytest.approx(random_params_valid.a3, abs=1e-9)
        assert g[4] == pytest.approx(random_params_valid.a5, abs=1e-9)

    def test_out_of_range_raises_error(self):
        with pytest.raises(InvalidParams, match="outside"):
            build(PantsFoldParams(3.0, 1.0, 1.0))

    def test_random_params_in_range(self, rng):
        for _ in range(20):
            params = random_params(rng)
            assert all(0.3 <= a <= 2.5 for a in params.lengths)
            assert all(0 <= t < 2 * a for t, a in zip(params.twists, params.lengths))

    def test_trace_length_consistency(self, random_marking):
        for i in range(1, 6):
            x = random_marking.r(i) @ random_marking.r(i + 1)
            d = random_marking.necklace_lengths()[i - 1]
            assert translation_length(x) == pytest.approx(2 * d, rel=1e-9)


class TestRelabeling:
    """Tests for rotate, mirror and conjugate."""

    def test_rotate_shifts_necklace(self, random_marking):
        lengths = random_marking.necklace_lengths()
        rotated = rotate(random_marking, 1).necklace_lengths()
        assert rotated == pytest.approx(lengths[1:] + lengths[:1], abs=1e-12)

    def test_rotate_full_turn(self, random_marking):
        assert rotate(random_marking, 6).w == random_marking.w

    @pytest.mark.parametrize("j,k", DIAGONALS)
    def test_mirror_swaps_sides(self, random_marking, j, k):
        mirrored = mirror(random_marking)
        for side in ("b", "B"):
            label = ArcLabel.parse(f"{side}{j}{k}")
            there = develop_label(mirrored, label.mirrored()).length
            here = develop_label(random_marking, label).length
            assert there == pytest.approx(here, abs=1e-9)

    def test_mirror_keeps_necklace(self, random_marking):
        assert mirror(random_marking).necklace_lengths() == pytest.approx(
            random_marking.necklace_lengths(), abs=1e-9
        )

    def test_mirror_is_an_involution(self, random_marking):
        twice = mirror(mirror(random_marking))
        for entry in theorem1_table():
            assert develop_label(twice, entry.rhs).length == pytest.approx(
                develop_label(random_marking, entry.rhs).length, abs=1e-9
            )

    def test_conjugate_preserves_lengths(self, random_marking):
        g = rotation(0.8) @ translation(0.6)
        moved = conjugate(random_marking, g)
        for text in ("b13", "B13", "b46", "B25"):
            label = ArcLabel.parse(text)
            assert develop_label(moved, label).length == pytest.approx(
                develop_label(random_marking, label).length, abs=1e-9
            )


class TestOct:
    """Tests for the octahedral orbifold."""

    def test_is_cached(self):
        assert oct() is oct()

    def test_symmetric_parameters(self, oct_pair):
        params, _ = oct_pair
        assert params.lengths == (OCT_EDGE, OCT_EDGE, OCT_EDGE)
        assert params.t1 == params.t3 == params.t5

    def test_twist_is_not_wrapped(self, oct_pair):
        # The solution sits just below zero; wrapping by 2a would give another marking.
        params, h = oct_pair
        assert -OCT_EDGE < params.t1 < 0.0
        assert build(params).necklace_lengths() == pytest.approx(h.necklace_lengths(), abs=1e-12)

    def test_edge_constant(self):
        assert OCT_EDGE == pytest.approx(math.acosh(1 + math.sqrt(2)), abs=1e-15)

    def test_necklace_lengths(self, oct_marking):
        assert oct_marking.necklace_lengths() == pytest.approx([OCT_EDGE] * 6, abs=1e-9)

    @pytest.mark.parametrize("text", OCT_EDGE_LABELS)
    def test_octahedron_edges(self, oct_marking, text):
        arc = develop_label(oct_marking, ArcLabel.parse(text))
        assert arc.verified
        assert arc.length == pytest.approx(OCT_EDGE, abs=1e-9)

    def test_rotation_symmetry(self, oct_marking):
        for r in (2, 4):
            rotated = rotate(oct_marking, r)
            for text in OCT_EDGE_LABELS:
                assert develop_label(rotated, ArcLabel.parse(text)).length == pytest.approx(
                    OCT_EDGE, abs=1e-9
                )


@pytest.mark.slow
class TestExceptional:
    """Tests for the exceptional orbifold (slow: multi-start solve)."""

    def test_residuals(self):
        _, h = exceptional()
        assert float(np.abs(exceptional_residuals(h)).max()) < 1e-8

    def test_in_domain_with_expected_tight_set(self):
        _, h = exceptional()
        report = check(h)
        assert report.in_domain
        assert report.tight == EXCEPTIONAL_TIGHT_SET

    def test_fourth_step_is_tight(self):
        _, h = exceptional()
        report = verify_minimality(h)
        assert report.minimal
        assert report.steps[3].margin == pytest.approx(0.0, abs=1e-7)

    def test_is_not_octahedral(self):
        _, h = exceptional()
        assert not np.allclose(h.necklace_lengths(), OCT_EDGE, atol=1e-6)


def test_identity_conjugation_is_noop(random_marking):
    same = conjugate(random_marking, Isometry.identity())
    assert same.necklace_lengths() == pytest.approx(random_marking.necklace_lengths())


@pytest.mark.slow
class TestSampledInvariants:
    """Structural invariants over fifty embedded random markings."""

    @pytest.fixture(scope="class")
    def sample(self, valid_markings):
        return valid_markings(13, 50)

    def test_trace_length_consistency(self, sample):
        for _, h in sample:
            g = h.necklace_lengths()
            for i in range(1, 7):
                x = h.r(i) @ h.r(i % 6 + 1)
                assert translation_length(x) == pytest.approx(2 * g[i - 1], rel=1e-9)

    def test_mirror_duality(self, sample):
        for _, h in sample:
            mirrored = mirror(h)
            for j, k in DIAGONALS[::3]:
                for side in ("b", "B"):
                    label = ArcLabel.parse(f"{side}{j}{k}")
                    assert develop_label(mirrored, label.mirrored()).length == pytest.approx(
                        develop_label(h, label).length, abs=1e-9
                    )

    def test_global_isometry_invariance(self, sample):
        rng = np.random.default_rng(4)
        for _, h in sample:
            g = rotation(rng.uniform(-math.pi, math.pi)) @ translation(rng.uniform(0.0, 2.0))
            moved = conjugate(h, g)
            for entry in theorem1_table():
                assert develop_label(moved, entry.rhs).length == pytest.approx(
                    develop_label(h, entry.rhs).length, abs=1e-9
                )

    def test_full_twist_moves_one_pair_along_its_axis(self, sample):
        checked = 0
        for params, h in sample:
            shifted_params = replace(params, t1=params.t1 + 2 * params.a1)
            try:
                shifted = build(shifted_params)
            except Maskit2Error:
                continue
            if not all(coincide(p, q, 1e-7) for p, q in zip(shifted.w[2:], h.w[2:])):
                # the hexagon was re-oriented; the pair comparison no longer applies
                continue
            x = h.r(1) @ h.r(2)
            assert (shifted.r(1) @ shifted.r(2)).same_as(x, 1e-7)
            for old, new in zip(h.w[:2], shifted.w[:2]):
                assert coincide(new, x.apply(old), 1e-6) or coincide(
                    new, x.inverse().apply(old), 1e-6
                )
            checked += 1
        assert checked >= 10
