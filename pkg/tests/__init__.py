"""Tests for maskit2."""
