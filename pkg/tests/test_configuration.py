"""
Tests for Configuration Module

Run with: pytest tests/test_configuration.py -v
"""

import pytest
import sys
import os

# Add parent directory to path for imports
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from dioa_core.configuration import (
    Configuration,
    ConfigurationError,
    IncompatibleConfigurationError,
    UnknownAutomatonError,
    destruction_nondeterminism,
    intrinsic_ext,
    intrinsic_signature,
    intrinsic_successors,
    is_reduced,
    reduce_config,
)
from dioa_core.sioa import ExtSig, Signature, UnknownStateError, make_sioa


@pytest.fixture
def registry(creation_model):
    return dict(creation_model.automata)


class TestConfiguration:
    """Tests for building configurations."""

    def test_members_sorted(self, one, sink):
        """Verify members are kept sorted by id."""
        config = Configuration.of({"SINK": "v", "ONE": "u"}, {"ONE": one, "SINK": sink})
        assert config.members == (("ONE", "u"), ("SINK", "v"))
        assert "ONE" in config
        assert config.state_of("SINK") == "v"
        assert config.text() == "[ONE@u, SINK@v]"

    def test_unknown_automaton(self, one):
        """Verify an unregistered id raises UnknownAutomatonError."""
        with pytest.raises(UnknownAutomatonError) as exc_info:
            Configuration.of({"SINK": "v"}, {"ONE": one})
        assert "not registered" in str(exc_info.value)

    def test_unknown_state(self, one):
        """Verify a state outside the member automaton is rejected."""
        with pytest.raises(UnknownStateError):
            Configuration.of({"ONE": "w"}, {"ONE": one})

    def test_duplicate_ids(self, one):
        """Verify a member id can occur only once."""
        with pytest.raises(ConfigurationError):
            Configuration.of([("ONE", "u"), ("ONE", "u")], {"ONE": one})

    def test_registry_not_compared(self, one, sink):
        """Verify equality ignores the registry."""
        left = Configuration.of({"ONE": "u"}, {"ONE": one})
        right = Configuration.of({"ONE": "u"}, {"ONE": one, "SINK": sink})
        assert left == right
        assert hash(left) == hash(right)


class TestIntrinsicSignature:
    """Tests for the intrinsic signature."""

    def test_one_sink(self, one, sink):
        """Verify the input matched by ONE's output disappears."""
        config = Configuration.of({"ONE": "u", "SINK": "v"}, {"ONE": one, "SINK": sink})
        assert intrinsic_signature(config) == Signature.of(outputs=["a"])
        assert intrinsic_ext(config) == ExtSig(outputs=frozenset({"a"}))

    def test_incompatible_members(self, one):
        """Verify two members outputting a are incompatible."""
        other = one.with_id("ONE2")
        config = Configuration.of({"ONE": "u", "ONE2": "u"}, {"ONE": one, "ONE2": other})
        with pytest.raises(IncompatibleConfigurationError) as exc_info:
            intrinsic_signature(config)
        assert exc_info.value.pair == ("ONE", "ONE2")

    def test_empty_configuration(self):
        """Verify the empty configuration has the empty signature."""
        assert intrinsic_signature(Configuration()).is_empty()


class TestReduction:
    """Tests for configuration reduction."""

    def test_destroyed_member_dropped(self, registry):
        """Verify a member with the empty signature is removed."""
        config = Configuration.of({"A": "s1", "C": "u0"}, registry)
        reduced = reduce_config(config)
        assert reduced.ids == {"C"}
        assert not is_reduced(config)
        assert is_reduced(reduced)


class TestIntrinsicTransitions:
    """Tests for intrinsic transitions with creation."""

    def test_creation_filters_incompatible(self, registry):
        """Verify creating A next to C at u1 is discarded."""
        config = Configuration.of({"C": "u0"}, registry)
        successors = intrinsic_successors(config, "c", {"A"})
        assert [s.members for s in successors] == [(("A", "s0"), ("C", "u2"))]

    def test_without_creation(self, registry):
        """Verify both branches of c remain when nothing is created."""
        config = Configuration.of({"C": "u0"}, registry)
        successors = intrinsic_successors(config, "c")
        assert {s.state_of("C") for s in successors} == {"u1", "u2"}

    def test_destruction_reduces(self, registry):
        """Verify the member that empties its signature leaves."""
        config = Configuration.of({"A": "s0", "C": "u2"}, registry)
        (after_a,) = intrinsic_successors(config, "a")
        assert after_a.members == (("C", "u2"),)

    def test_action_outside_signature(self, registry):
        """Verify an action outside the intrinsic signature has no successor."""
        config = Configuration.of({"C": "u0"}, registry)
        assert intrinsic_successors(config, "d") == ()

    def test_unknown_created(self, registry):
        """Verify an unregistered created id raises UnknownAutomatonError."""
        config = Configuration.of({"C": "u0"}, registry)
        with pytest.raises(UnknownAutomatonError):
            intrinsic_successors(config, "c", {"Z"})


class TestDestructionNondeterminism:
    """Tests for destruction decided by the target state."""

    def test_detects_mixed_outcomes(self):
        """Verify an action leading to both empty and live states is flagged."""
        aut = make_sioa(
            "N",
            {"s": Signature.of(outputs=["x"]), "t": Signature()},
            [("s", "x", "s"), ("s", "x", "t")],
            ["s"],
        )
        assert destruction_nondeterminism(aut) == [("s", "x")]

    def test_deterministic_destruction(self, registry):
        """Verify A destroys itself deterministically."""
        assert destruction_nondeterminism(registry["A"]) == []
