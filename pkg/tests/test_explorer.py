"""
Tests for Explorer Module

Run with: pytest tests/test_explorer.py -v
"""

import pytest
import sys
import os

# Add parent directory to path for imports
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from dioa_core import explorer
from dioa_core.algebra import compose_sioa
from dioa_core.explorer import (
    ACTIONS,
    FULL,
    accepts_trace,
    action_projection_set,
    bounded_refinement,
    enumerate_executions,
    enumerate_traces,
    trace_acceptor,
    trace_inclusion,
)
from dioa_core.sioa import ExtSig, Signature, make_sioa


class TestEnumeration:
    """Tests for bounded enumeration."""

    def test_executions_of_one(self, one):
        """Verify the a-loop yields one execution per length."""
        executions = list(enumerate_executions(one, 2))
        assert [len(alpha) for alpha in executions] == [0, 1, 2]

    def test_full_traces_of_one(self, one, out_a):
        """Verify full traces alternate the signature and a."""
        assert enumerate_traces(one, 2) == [
            (out_a,),
            (out_a, "a", out_a),
            (out_a, "a", out_a, "a", out_a),
        ]

    def test_action_traces_of_one(self, one):
        """Verify action-only traces include the empty trace."""
        assert enumerate_traces(one, 2, ACTIONS) == [(), ("a",), ("a", "a")]

    def test_depth_zero(self, one, out_a):
        """Verify depth 0 yields only the start signature."""
        assert enumerate_traces(one, 0) == [(out_a,)]

    def test_unknown_mode(self, one):
        """Verify an unknown mode raises ValueError."""
        with pytest.raises(ValueError) as exc_info:
            enumerate_traces(one, 1, "partial")
        assert "Unsupported mode" in str(exc_info.value)

    def test_action_projection_set(self, one):
        """Verify full traces project onto their action sequences."""
        assert action_projection_set(enumerate_traces(one, 2)) == [(), ("a",), ("a", "a")]

    def test_signature_change_without_action(self):
        """Verify an internal step that changes the signature is visible."""
        aut = make_sioa(
            "H",
            {"s": Signature.of(outputs=["a"], internals=["h"]), "t": Signature.of(inputs=["b"])},
            [("s", "h", "t"), ("t", "b", "t")],
            ["s"],
        )
        first = ExtSig(outputs=frozenset({"a"}))
        second = ExtSig(inputs=frozenset({"b"}))
        assert (first, second) in enumerate_traces(aut, 1)
        assert enumerate_traces(aut, 1, ACTIONS) == [()]


class TestMembership:
    """Tests for trace membership."""

    def test_accepts_with_witness(self, one, out_a):
        """Verify an accepted trace comes with a witnessing execution."""
        membership = accepts_trace(one, (out_a, "a", out_a))
        assert membership
        assert membership.execution.actions == ("a",)

    def test_rejects_foreign_action(self, one):
        """Verify an action the automaton never performs is rejected."""
        assert not accepts_trace(one, ("b",), ACTIONS)

    def test_terminating_membership(self):
        """Verify terminating traces need a destroying last action."""
        aut = make_sioa(
            "A",
            {"s0": Signature.of(outputs=["a", "b"]), "s1": Signature()},
            [("s0", "a", "s1")],
            ["s0"],
        )
        start = ExtSig(outputs=frozenset({"a", "b"}))
        assert accepts_trace(aut, (start, "a"), FULL, terminating=True)
        assert not accepts_trace(aut, (start, "b"), FULL, terminating=True)

    def test_acceptor_matches_accepts_trace(self, phone):
        """Verify a reusable acceptor decides every trace like accepts_trace."""
        composite = compose_sioa(phone, aut_id="Phone")
        accepts = trace_acceptor(composite, ACTIONS)
        traces = enumerate_traces(composite, 4, ACTIONS) + [("talk1", "talk1", "gain2"), ("switch2",)]
        for trace in traces:
            assert bool(accepts(trace)) == bool(accepts_trace(composite, trace, ACTIONS)), trace
        assert accepts(traces[0]).execution is not None

    def test_acceptor_indexes_once(self, one, out_a, monkeypatch):
        """Verify the automaton is indexed when the acceptor is built, not per trace."""
        built = []
        original = explorer._Index.__init__

        def counting_init(self, automaton):
            built.append(automaton.aut_id)
            original(self, automaton)

        monkeypatch.setattr(explorer._Index, "__init__", counting_init)
        accepts = trace_acceptor(one)
        for n in range(4):
            assert accepts((out_a,) + ("a", out_a) * n)
        assert built == ["ONE"]

    def test_acceptor_unknown_mode(self, one):
        """Verify an unknown mode is rejected when the acceptor is built."""
        with pytest.raises(ValueError):
            trace_acceptor(one, "partial")


class TestInclusion:
    """Tests for trace inclusion and bounded refinement."""

    def test_inclusion_fails_with_least_witness(self, one, silent_one):
        """Verify the missing trace is reported."""
        result = trace_inclusion(one, silent_one, 3)
        assert not result
        assert result.witness_text() == "{|a} a {|a}"

    def test_inclusion_holds_reversed(self, one, silent_one):
        """Verify the silent automaton's traces are traces of ONE."""
        result = trace_inclusion(silent_one, one, 3, exact_right=True)
        assert result
        assert result.checked == 1

    def test_action_only_witness(self, one, silent_one):
        """Verify action-only witnesses print as action lists."""
        result = trace_inclusion(one, silent_one, 3, ACTIONS)
        assert result.witness == ("a",)
        assert result.witness_text() == "a"

    def test_budget_makes_inconclusive(self, one):
        """Verify a cut-off search is inconclusive rather than failed."""
        result = bounded_refinement(one, one, 1, FULL, budget=0)
        assert result.holds
        assert result.inconclusive

    def test_enough_budget(self, one):
        """Verify a sufficient budget decides the refinement."""
        result = bounded_refinement(one, one, 2, FULL, budget=2)
        assert result.holds
        assert not result.inconclusive
