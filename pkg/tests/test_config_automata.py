"""
Tests for Configuration Automata Module

Run with: pytest tests/test_config_automata.py -v
"""

import random

import pytest
import sys
import os
from dataclasses import replace

# Add parent directory to path for imports
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from dioa_core.algebra import Renaming, rename_sioa
from dioa_core.config_automata import (
    CACompatibilityError,
    CAError,
    CreationPolicy,
    PolicyError,
    PolicyRule,
    as_member,
    ca_states_text,
    compose_ca,
    generate_ca,
    hide_ca,
    rename_ca,
    validate_ca,
)
from dioa_core.configuration import Configuration, reduce_config
from dioa_core.random_models import random_family, random_hide_set, random_policy, random_renaming
from dioa_core.sioa import Signature, sorted_states


@pytest.fixture
def registry(creation_model):
    return dict(creation_model.automata)


@pytest.fixture
def creates_a():
    return CreationPolicy((PolicyRule.of(["C"], "c", ["A"], {"C": "u0"}),))


def _plain_ca(name, aut):
    registry = {aut.aut_id: aut}
    (start,) = aut.starts
    initial = Configuration.of({aut.aut_id: start}, registry)
    return generate_ca(name, [initial], CreationPolicy(), registry, 4)


class TestPolicy:
    """Tests for creation policies."""

    def test_rule_matches_exact_members(self, registry):
        """Verify a rule needs the exact member set and state constraints."""
        rule = PolicyRule.of(["C"], "c", ["A"], {"C": "u0"})
        assert rule.matches(Configuration.of({"C": "u0"}, registry), "c")
        assert not rule.matches(Configuration.of({"C": "u1"}, registry), "c")
        assert not rule.matches(Configuration.of({"C": "u0", "B": "t0"}, registry), "c")
        assert not rule.matches(Configuration.of({"C": "u0"}, registry), "d")

    def test_lookup_unions_rules(self, registry):
        """Verify matching rules contribute their create sets together."""
        policy = CreationPolicy(
            (PolicyRule.of(["C"], "c", ["A"]), PolicyRule.of(["C"], "c", ["B"]))
        )
        assert policy.lookup(Configuration.of({"C": "u0"}, registry), "c") == {"A", "B"}

    def test_unknown_reference(self, registry):
        """Verify a rule mentioning an unknown automaton raises PolicyError."""
        policy = CreationPolicy((PolicyRule.of(["C"], "c", ["Z"]),))
        with pytest.raises(PolicyError) as exc_info:
            policy.check(registry)
        assert "Z" in str(exc_info.value)


class TestGenerate:
    """Tests for CA generation."""

    def test_creation_example_x(self, registry, creates_a):
        """Verify X reaches exactly five configurations."""
        start = Configuration.of({"C": "u0"}, registry)
        ca = generate_ca("X", [start], creates_a, registry, 8)
        texts = {str(ca.config(x)) for x in ca.states}
        assert texts == {"[C@u0]", "[A@s0, C@u2]", "[C@u2]", "[A@s0]", "[]"}
        assert ca.created(start, "c") == {"A"}
        assert ca.creators() == {"A"}
        assert not ca.frontier
        assert validate_ca(ca).ok

    def test_depth_zero_frontier(self, registry, creates_a):
        """Verify depth 0 leaves the start configuration unexpanded."""
        start = Configuration.of({"C": "u0"}, registry)
        ca = generate_ca("X", [start], creates_a, registry, 0)
        assert ca.states == {start}
        assert ca.frontier == {start}
        assert validate_ca(ca).ok

    def test_initial_not_start_state(self, registry, creates_a):
        """Verify an initial member must be in a start state."""
        with pytest.raises(CAError) as exc_info:
            generate_ca("X", [Configuration.of({"C": "u1"}, registry)], creates_a, registry, 2)
        assert "not in a start state" in str(exc_info.value)

    def test_initial_required(self, registry, creates_a):
        """Verify at least one initial configuration is required."""
        with pytest.raises(CAError):
            generate_ca("X", [], creates_a, registry, 2)


class TestValidate:
    """Tests for the CA constraints."""

    def test_hiding_keeps_constraints(self, one):
        """Verify a CA with a hidden output still meets the signature relations."""
        ca = hide_ca(_plain_ca("P", one), {"a"})
        assert validate_ca(ca).ok

    def test_missing_step_is_incomplete(self, one):
        """Verify dropping a step violates completeness."""
        ca = _plain_ca("P", one)
        broken = replace(ca, underlying=replace(ca.underlying, steps=frozenset()))
        report = validate_ca(broken)
        assert report.tags() == {"CA3"}


class TestOperators:
    """Tests for CA composition, hiding and renaming."""

    def test_compose_disjoint(self, one, sink):
        """Verify two CAs over different members compose into a valid CA."""
        composite = compose_ca([_plain_ca("P", one), _plain_ca("Q", sink)], name="PQ")
        assert composite.aut_id == "PQ"
        (state,) = composite.states
        assert str(composite.config(state)) == "[ONE@u, SINK@v]"
        assert validate_ca(composite).ok

    def test_compose_single(self, one):
        """Verify composing one CA returns it."""
        ca = _plain_ca("P", one)
        assert compose_ca([ca]) is ca

    def test_compose_shared_member(self, creation_model):
        """Verify X and Y cannot compose since both hold C."""
        with pytest.raises(CACompatibilityError) as exc_info:
            compose_ca([creation_model.target("X"), creation_model.target("Y")])
        assert exc_info.value.clause == 1

    def test_hide(self, one):
        """Verify hiding turns a CA output internal."""
        ca = hide_ca(_plain_ca("P", one), {"a"}, name="PH")
        (state,) = ca.states
        assert ca.signature(state) == Signature.of(internals=["a"])
        assert ca.aut_id == "PH"

    def test_rename(self, one):
        """Verify renaming reaches member automata."""
        ca = rename_ca(_plain_ca("P", one), Renaming.of({"a": "b"}), ids={"ONE": "ONE_B"})
        (state,) = ca.states
        config = ca.config(state)
        assert config.ids == {"ONE_B"}
        assert config.signature_of("ONE_B") == Signature.of(outputs=["b"])
        assert validate_ca(ca).ok

    def test_as_member_and_rows(self, one):
        """Verify a CA can be registered and annotated."""
        ca = _plain_ca("P", one)
        assert as_member(ca, "P2").aut_id == "P2"
        rows = ca_states_text(ca)
        assert rows[0]["config"] == "[ONE@u]"
        assert rows[0]["created"] == {}


def _random_ca(rng, name, prefix=None):
    """A generated CA over a random family; `prefix` renames its actions and ids apart."""
    family = random_family(rng)
    if prefix is not None:
        actions = sorted(set().union(*(aut.actions() for aut in family)))
        renaming = random_renaming(rng, actions, prefix=prefix)
        family = [rename_sioa(aut, renaming, aut_id=f"B{k}") for k, aut in enumerate(family)]
    registry = {aut.aut_id: aut for aut in family}
    starting = family[: rng.randint(1, len(family) - 1)]
    initial = reduce_config(
        Configuration.of({aut.aut_id: sorted_states(aut.starts)[0] for aut in starting}, registry)
    )
    policy = random_policy(rng, registry, initial)
    return generate_ca(name, [initial], policy, registry, rng.randint(2, 3))


class TestOperatorClosure:
    """Tests that CA generation and the CA operators yield valid CAs."""

    def test_random_applications_validate(self):
        """Verify 500 random generations, compositions, hidings and renamings all validate."""
        for seed in range(500):
            rng = random.Random(seed)
            operator = rng.choice(["generate", "compose", "hide", "rename"])
            ca = _random_ca(rng, f"X{seed}")
            if operator == "generate":
                result = ca
            elif operator == "compose":
                result = compose_ca([ca, _random_ca(rng, f"Y{seed}", prefix="q")])
            elif operator == "hide":
                result = hide_ca(ca, random_hide_set(rng, ca.underlying))
            else:
                actions = sorted(set().union(*(aut.actions() for aut in ca.registry.values())))
                result = rename_ca(ca, random_renaming(rng, actions))
            report = validate_ca(result)
            assert report.ok, (seed, operator, report.summary())
