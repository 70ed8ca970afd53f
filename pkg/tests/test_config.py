"""Tests for configuration."""

import argparse

import pytest

from src.config import DEFAULT_CONFIG, Config


class TestConfig:
    """Tests for Config validation and overrides."""

    def test_defaults(self):
        assert (DEFAULT_CONFIG.max_word, DEFAULT_CONFIG.max_cross) == (8, 3)
        assert (DEFAULT_CONFIG.a_min, DEFAULT_CONFIG.a_max) == (0.3, 2.5)
        assert DEFAULT_CONFIG.depth == 3

    @pytest.mark.parametrize(
        "kwargs",
        [{"max_word": 0}, {"max_cross": -1}, {"a_min": 2.5}, {"domain_tol": 0.0}, {"vertex_tol": -1e-6}],
    )
    def test_invalid_values(self, kwargs):
        with pytest.raises(ValueError):
            Config(**kwargs)

    def test_from_args(self):
        args = argparse.Namespace(
            tol=1e-8, max_word=5, max_cross=None, workers=4, log_level="DEBUG"
        )
        config = Config.from_args(args)
        assert config.domain_tol == 1e-8
        assert config.max_word == 5
        assert config.max_cross == DEFAULT_CONFIG.max_cross
        assert config.workers == 4
        assert config.log_level == "DEBUG"
        assert config.depth == 3

    def test_from_empty_namespace(self):
        assert Config.from_args(argparse.Namespace()) == DEFAULT_CONFIG

    def test_bounded_ignores_none(self):
        assert DEFAULT_CONFIG.bounded(max_word=None) is DEFAULT_CONFIG
        assert DEFAULT_CONFIG.bounded(max_cross=2).depth == 2
