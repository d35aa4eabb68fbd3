"""
Tests for Settings Module

Run with: pytest tests/test_settings.py -v
"""

import pytest
import sys
import os

# Add parent directory to path for imports
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from dioa_core.settings import (
    THEOREM_CONFIG,
    _env_int,
    get_theorem_config,
    list_theorems,
    right_depth_for,
)


class TestTheoremConfig:
    """Tests for theorem oracle configuration."""

    def test_all_theorems_configured(self):
        """Verify every oracle id is defined."""
        assert list_theorems() == [
            "projection",
            "pasting",
            "finite-trace-pasting",
            "substitutivity",
            "hiding-mono",
            "renaming-mono",
            "congruence",
            "creation-mono",
        ]

    def test_every_entry_has_instances(self):
        """Verify each entry sets the size of its random suite."""
        for theorem_id, config in THEOREM_CONFIG.items():
            assert config["instances"] >= 1, theorem_id

    def test_creation_mono_caps(self):
        """Verify the creation oracle caps its correspondence search."""
        config = get_theorem_config("creation-mono")
        assert config["max_executions"] == 500
        assert "rab_depth" not in config

    def test_pruned_variants_only_for_substitution_oracles(self):
        """Verify only oracles that compare variants mix in pruned ones."""
        mixing = [t for t, config in THEOREM_CONFIG.items() if "pruned_variants" in config]
        assert mixing == ["substitutivity", "hiding-mono", "renaming-mono", "congruence"]
        assert all(0 < THEOREM_CONFIG[t]["pruned_variants"] < 0.3 for t in mixing)

    def test_config_is_a_copy(self):
        """Verify callers cannot alter the shared table."""
        config = get_theorem_config("projection")
        config["instances"] = 0
        assert THEOREM_CONFIG["projection"]["instances"] == 200

    def test_unsupported_theorem_raises(self):
        """Verify an unknown theorem id raises ValueError."""
        with pytest.raises(ValueError) as exc_info:
            get_theorem_config("zips")
        assert "Unsupported theorem" in str(exc_info.value)
        assert "projection" in str(exc_info.value)


class TestRightDepth:
    """Tests for the right-hand exploration budget."""

    def test_creation_mono_triples(self):
        """Verify the creation oracle explores three times deeper."""
        assert right_depth_for("creation-mono", 4) == 12

    def test_default_factor(self):
        """Verify a theorem without a factor keeps the depth."""
        assert right_depth_for("substitutivity", 4) == 4


class TestEnvironment:
    """Tests for environment defaults."""

    def test_missing_uses_default(self, monkeypatch):
        """Verify an unset variable falls back to the default."""
        monkeypatch.delenv("DIOA_TEST_DEPTH", raising=False)
        assert _env_int("DIOA_TEST_DEPTH", 6) == 6

    def test_integer_value(self, monkeypatch):
        """Verify an integer value is used."""
        monkeypatch.setenv("DIOA_TEST_DEPTH", "9")
        assert _env_int("DIOA_TEST_DEPTH", 6) == 9

    def test_non_integer_ignored(self, monkeypatch):
        """Verify a non-integer value falls back to the default."""
        monkeypatch.setenv("DIOA_TEST_DEPTH", "deep")
        assert _env_int("DIOA_TEST_DEPTH", 6) == 6

    def test_negative_ignored(self, monkeypatch):
        """Verify a negative value falls back to the default."""
        monkeypatch.setenv("DIOA_TEST_DEPTH", "-3")
        assert _env_int("DIOA_TEST_DEPTH", 6) == 6
