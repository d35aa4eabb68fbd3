"""
Tests for Behavior Module

Run with: pytest tests/test_behavior.py -v
"""

import itertools
import random

import pytest
import sys
import os

from hypothesis import given
from hypothesis import strategies as st

# Add parent directory to path for imports
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from dioa_core.algebra import compose_sioa
from dioa_core.behavior import (
    BehaviorError,
    Execution,
    NotAnExecutionError,
    ProjectionError,
    action_projection,
    check_execution,
    directed_actions,
    format_trace,
    is_execution,
    is_signature,
    is_trace,
    parse_trace,
    paste_check,
    pretrace_problem,
    project_execution,
    reduce_pretrace,
    stutter_equiv,
    trace_of,
    trace_sort_key,
    zip_candidates,
    zip_check,
    zip_check_bruteforce,
    zips_check,
)
from dioa_core.explorer import enumerate_traces
from dioa_core.random_models import random_family
from dioa_core.sioa import ExtSig, Signature, make_sioa

SIGS = [
    ExtSig(outputs=frozenset({"a"})),
    ExtSig(inputs=frozenset({"a"})),
    ExtSig(frozenset({"b"}), frozenset({"a"})),
]

pretraces = st.lists(st.sampled_from(SIGS), min_size=1, max_size=8)


def _terminating_a():
    return make_sioa(
        "A",
        {"s0": Signature.of(outputs=["a", "b"]), "s1": Signature()},
        [("s0", "a", "s1")],
        ["s0"],
    )


class TestExecution:
    """Tests for executions and their checks."""

    def test_needs_a_state(self):
        """Verify an execution has at least one state."""
        with pytest.raises(BehaviorError):
            Execution("ONE", ())

    def test_shape_mismatch(self):
        """Verify the number of actions must match the states."""
        with pytest.raises(BehaviorError) as exc_info:
            Execution("ONE", ("u",), ("a", "a"))
        assert "1 states and 2 actions" in str(exc_info.value)

    def test_prefix_and_text(self):
        """Verify prefixes and the interleaved text form."""
        alpha = Execution("ONE", ("u", "u", "u"), ("a", "a"))
        assert alpha.prefix(1) == Execution("ONE", ("u", "u"), ("a",))
        assert alpha.text() == "u a u a u"
        assert len(alpha) == 2

    def test_valid_execution(self, one):
        """Verify a repeated a-loop is an execution of ONE."""
        assert is_execution(one, Execution("ONE", ("u", "u"), ("a",)))

    def test_non_start_state(self, one):
        """Verify an execution must begin in a start state."""
        aut = one.with_starts([])
        with pytest.raises(NotAnExecutionError) as exc_info:
            check_execution(aut, Execution("ONE", ("u",)))
        assert exc_info.value.index == 0
        check_execution(aut, Execution("ONE", ("u",)), fragment=True)

    def test_bad_step(self, one):
        """Verify a step outside the relation is located."""
        with pytest.raises(NotAnExecutionError) as exc_info:
            check_execution(one, Execution("ONE", ("u", "u"), ("b",)))
        assert exc_info.value.index == 1

    def test_terminating(self):
        """Verify a terminating execution ends with a destroying action."""
        aut = _terminating_a()
        alpha = Execution("A", ("s0",), ("a",))
        assert alpha.terminating
        assert is_execution(aut, alpha)


class TestTraces:
    """Tests for traces and stuttering."""

    def test_trace_of_loop(self, one, out_a):
        """Verify the trace of an a-step keeps both signatures."""
        beta = trace_of(one, Execution("ONE", ("u", "u"), ("a",)))
        assert beta == (out_a, "a", out_a)
        assert is_trace(beta)

    def test_internal_steps_vanish(self, out_a):
        """Verify internal steps with an unchanged signature leave no mark."""
        aut = make_sioa(
            "H",
            {"s": Signature.of(outputs=["a"], internals=["h"])},
            [("s", "h", "s")],
            ["s"],
        )
        assert trace_of(aut, Execution("H", ("s", "s", "s"), ("h", "h"))) == (out_a,)

    def test_terminating_trace_ends_in_action(self):
        """Verify a terminating trace ends with its final action."""
        aut = _terminating_a()
        beta = trace_of(aut, Execution("A", ("s0",), ("a",)))
        assert beta == (ExtSig(outputs=frozenset({"a", "b"})), "a")

    def test_reduce(self, out_a, in_a):
        """Verify repeated signatures collapse to one."""
        assert reduce_pretrace((out_a, out_a, "a", in_a, in_a)) == (out_a, "a", in_a)

    def test_pretrace_problems(self, out_a):
        """Verify malformed sequences are explained."""
        assert pretrace_problem(()) == "empty sequence"
        assert "first element" in pretrace_problem(("a", out_a))
        assert "not in the preceding signature" in pretrace_problem((out_a, "b", out_a))
        assert "does not end" in pretrace_problem((out_a, "a"))
        assert pretrace_problem((out_a, "a"), finished=False) is None

    def test_not_reduced_is_not_trace(self, out_a):
        """Verify a stuttering pretrace is not a trace."""
        assert not is_trace((out_a, out_a))

    def test_projections(self, out_a, in_a):
        """Verify the action projection and directions."""
        beta = (out_a, "a", in_a, "a", in_a)
        assert action_projection(beta) == ("a", "a")
        assert directed_actions(beta) == (("a", "out"), ("a", "in"))

    def test_text_form(self, out_a, in_a):
        """Verify the canonical text form parses back."""
        beta = (out_a, "a", in_a)
        assert format_trace(beta) == "{|a} a {a|}"
        assert parse_trace("{|a} a {a|}") == beta

    @given(pretraces)
    def test_reduce_idempotent(self, gamma):
        """Verify reducing twice equals reducing once."""
        once = reduce_pretrace(gamma)
        assert reduce_pretrace(once) == once
        assert is_trace(once)

    @given(pretraces, st.integers(0, 7))
    def test_duplicating_keeps_stutter_class(self, gamma, index):
        """Verify repeating one signature stays stutter-equivalent."""
        i = index % len(gamma)
        stuttered = gamma[: i + 1] + [gamma[i]] + gamma[i + 1 :]
        assert stutter_equiv(gamma, stuttered)
        assert stutter_equiv(stuttered, gamma)


class TestProjectionAndPasting:
    """Tests for execution projection and pasting."""

    def test_project_onto_sink(self, one, sink):
        """Verify the composite a-step projects onto SINK."""
        composite = compose_sioa([one, sink])
        alpha = Execution(composite.aut_id, (("u", "v"), ("u", "v")), ("a",))
        assert project_execution(composite, alpha, 1) == Execution("SINK", ("v", "v"), ("a",))

    def test_projection_needs_composition(self, one):
        """Verify projecting a plain automaton raises ProjectionError."""
        with pytest.raises(ProjectionError):
            project_execution(one, Execution("ONE", ("u",)), 0)

    def test_projection_index_range(self, one, sink):
        """Verify the component index is checked."""
        composite = compose_sioa([one, sink])
        with pytest.raises(ProjectionError) as exc_info:
            project_execution(composite, Execution(composite.aut_id, (("u", "v"),)), 2)
        assert "out of range" in str(exc_info.value)

    def test_paste_accepts_execution(self, one, sink):
        """Verify a real execution pastes."""
        composite = compose_sioa([one, sink])
        alpha = Execution(composite.aut_id, (("u", "v"), ("u", "v")), ("a",))
        assert paste_check(composite, alpha)

    def test_paste_rejects_silent_change(self, one):
        """Verify a component that moves outside its signature breaks clause 2."""
        flip = make_sioa(
            "P",
            {"p0": Signature.of(outputs=["b"]), "p1": Signature.of(outputs=["b"])},
            [("p0", "b", "p1"), ("p1", "b", "p0")],
            ["p0"],
        )
        composite = compose_sioa([one, flip])
        alpha = Execution(composite.aut_id, (("u", "p0"), ("u", "p1")), ("a",))
        report = paste_check(composite, alpha)
        assert not report
        assert report.clause == "2"
        assert report.index == 1


class TestZip:
    """Tests for the zips and zip predicates."""

    def test_one_sink_zip(self, out_a, in_a):
        """Verify the ONE || SINK trace zips the component traces."""
        parts = [(out_a, "a", out_a), (in_a, "a", in_a)]
        beta = (out_a, "a", out_a)
        assert zips_check(beta, parts)
        assert zip_check(beta, parts)
        assert zip_check_bruteforce(beta, parts)
        assert zip_candidates(parts) == {beta}

    def test_wrong_product(self, out_a, in_a):
        """Verify a signature that is not the product fails clause 3."""
        report = zips_check((in_a,), [(out_a,), (in_a,)])
        assert not report
        assert report.clause == "3"
        assert not zip_check((in_a,), [(out_a,), (in_a,)])

    def test_length_mismatch(self, out_a, in_a):
        """Verify parts must have the length of the sequence."""
        report = zips_check((out_a,), [(out_a, "a", out_a), (in_a,)])
        assert report.clause == "1"

    def test_stuttered_parts(self, out_a, in_a):
        """Verify zip finds an alignment when one part stutters."""
        other = ExtSig(inputs=frozenset({"b"}))
        parts = [(out_a, "a", out_a), (other,)]
        beta = (ExtSig(frozenset({"b"}), frozenset({"a"})), "a", ExtSig(frozenset({"b"}), frozenset({"a"})))
        assert zip_check(beta, parts)
        assert zip_check_bruteforce(beta, parts)


def _action_count(trace):
    return sum(1 for e in trace if not is_signature(e))


class TestZipAgreement:
    """Tests for zip_check against the brute-force stuttering oracle."""

    @pytest.mark.parametrize("seed", range(10))
    def test_agrees_on_random_families(self, seed):
        """Verify both searches agree on small trace tuples of random two-component families."""
        rng = random.Random(seed)
        family = random_family(rng, max_components=2)
        composite_traces = enumerate_traces(compose_sioa(family), 2)
        tuples = list(itertools.product(*[enumerate_traces(aut, 1) for aut in family]))
        for parts in rng.sample(tuples, min(3, len(tuples))):
            betas = sorted(zip_candidates(parts), key=trace_sort_key)[:2]
            betas += rng.sample(composite_traces, min(2, len(composite_traces)))
            for beta in betas:
                assert _action_count(beta) + sum(_action_count(p) for p in parts) <= 5
                assert zip_check(beta, parts) == zip_check_bruteforce(beta, parts), (beta, parts)
