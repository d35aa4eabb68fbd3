"""
Random Models Module

Seeded generator of small compatible SIOA families and of the variants the
theorem oracles compare them with (supersets, pruned variants, bisimilar
clones, renamings, hide sets), plus random creation policies for
configuration automata.

Every component owns its output and internal actions and takes inputs only
from the outputs of the other components, so every state tuple of a family
is compatible.
"""

import logging
import random
from typing import Dict, FrozenSet, List, Sequence, Set, Tuple

from dioa_core.algebra import Renaming
from dioa_core.config_automata import CreationPolicy, PolicyRule
from dioa_core.configuration import Configuration, Registry
from dioa_core.sioa import Action, Signature, Sioa, Step, make_sioa, sorted_states

logger = logging.getLogger(__name__)

MAX_COMPONENTS = 3
MAX_STATES = 4
MAX_ACTIONS = 4
MAX_STEPS = 6


def _subset(rng: random.Random, pool: Sequence[Action], keep: float = 0.6) -> FrozenSet[Action]:
    return frozenset(a for a in pool if rng.random() < keep)


def _owned_actions(rng: random.Random, count: int) -> List[Tuple[List[Action], List[Action]]]:
    """(outputs, internals) per component; names are unique across the family."""
    owned = []
    for k in range(count):
        outputs = [f"o{k}{m}" for m in range(rng.randint(1, 2))]
        internals = [f"h{k}{m}" for m in range(rng.randint(0, 1))]
        owned.append((outputs, internals))
    return owned


def random_component(
    rng: random.Random,
    aut_id: str,
    outputs: Sequence[Action],
    internals: Sequence[Action],
    inputs: Sequence[Action],
    max_states: int = MAX_STATES,
    max_steps: int = MAX_STEPS,
) -> Sioa:
    """
    A random input-enabled automaton over the given action pools.

    Input-enabling steps are drawn first; when they alone exceed
    `max_steps`, inputs are dropped from signatures until they fit. The
    remaining budget goes to output and internal steps.
    """
    states = [f"s{i}" for i in range(rng.randint(1, max_states))]
    sig: Dict[str, Signature] = {
        s: Signature(_subset(rng, inputs), _subset(rng, outputs), _subset(rng, internals))
        for s in states
    }
    while sum(len(sig[s].inputs) for s in states) > max_steps:
        crowded = [s for s in states if sig[s].inputs]
        victim = rng.choice(crowded)
        dropped = rng.choice(sorted(sig[victim].inputs))
        current = sig[victim]
        sig[victim] = Signature(current.inputs - {dropped}, current.outputs, current.internals)

    steps: Set[Step] = set()
    for s in states:
        for action in sorted(sig[s].inputs):
            steps.add((s, action, rng.choice(states)))
    controlled = [(s, a) for s in states for a in sorted(sig[s].locally_controlled)]
    rng.shuffle(controlled)
    for s, action in controlled:
        if len(steps) >= max_steps:
            break
        steps.add((s, action, rng.choice(states)))
    return make_sioa(aut_id, sig, steps, [states[0]])


def random_family(
    rng: random.Random,
    min_components: int = 2,
    max_components: int = MAX_COMPONENTS,
    max_states: int = MAX_STATES,
    max_actions: int = MAX_ACTIONS,
    max_steps: int = MAX_STEPS,
) -> List[Sioa]:
    """
    A compatible family of min_components..max_components automata named A0, A1, ...

    Each automaton has at most `max_actions` actions: its own outputs and
    internals first, then inputs drawn from the other components' outputs.
    """
    count = rng.randint(min(min_components, max_components), max_components)
    owned = _owned_actions(rng, count)
    family = []
    for k, (outputs, internals) in enumerate(owned):
        room = max(0, max_actions - len(outputs) - len(internals))
        foreign = sorted(a for j, (outs, _) in enumerate(owned) if j != k for a in outs)
        inputs = rng.sample(foreign, min(room, len(foreign), rng.randint(0, room)))
        family.append(
            random_component(rng, f"A{k}", outputs, internals, sorted(inputs), max_states, max_steps)
        )
    return family


def superset_variant(rng: random.Random, aut: Sioa, extra: int = 2) -> Sioa:
    """Same signatures, a few more steps: every trace of `aut` stays a trace."""
    states = sorted_states(aut.states)
    steps = set(aut.steps)
    pairs = [(s, a) for s in states for a in sorted(aut.acts(s))]
    rng.shuffle(pairs)
    for s, action in pairs[:extra]:
        steps.add((s, action, rng.choice(states)))
    return make_sioa(aut.aut_id, aut.sig, steps, aut.starts, aut.states)


def pruned_variant(rng: random.Random, aut: Sioa, drop: int = 1) -> Sioa:
    """
    Same signatures, up to `drop` fewer output or internal steps.

    Input steps stay, so the variant is still input enabled; it usually
    loses traces. Without a locally controlled step `aut` is returned as is.
    """
    removable = sorted(
        (s, a, t) for s, a, t in aut.steps if a in aut.signature(s).locally_controlled
    )
    if not removable:
        return aut
    dropped = set(rng.sample(removable, min(drop, len(removable))))
    steps = set(aut.steps) - dropped
    logger.debug("Pruned %s: dropped %s", aut.aut_id, sorted(dropped))
    return make_sioa(aut.aut_id, aut.sig, steps, aut.starts, aut.states)


def _clone_name(state: str) -> str:
    return f"{state}'"


def bisimilar_clone(aut: Sioa) -> Sioa:
    """Duplicates every state; the clone has exactly the same traces."""
    sig: Dict[str, Signature] = {}
    for s in aut.states:
        sig[s] = aut.signature(s)
        sig[_clone_name(s)] = aut.signature(s)
    steps: Set[Step] = set()
    for src, action, dst in aut.steps:
        for a in (src, _clone_name(src)):
            for b in (dst, _clone_name(dst)):
                steps.add((a, action, b))
    starts = set(aut.starts) | {_clone_name(s) for s in aut.starts}
    return make_sioa(aut.aut_id, sig, steps, starts)


def random_renaming(rng: random.Random, actions: Sequence[Action], prefix: str = "r") -> Renaming:
    """Injective renaming of `actions` onto shuffled fresh names."""
    ordered = sorted(set(actions))
    fresh = [f"{prefix}{i}" for i in range(len(ordered))]
    rng.shuffle(fresh)
    return Renaming.of(dict(zip(ordered, fresh)))


def random_hide_set(rng: random.Random, aut: Sioa) -> FrozenSet[Action]:
    outputs = sorted({a for s in aut.states for a in aut.signature(s).outputs})
    return _subset(rng, outputs, keep=0.5)


def random_policy(
    rng: random.Random,
    registry: Registry,
    initial: Configuration,
    rules: int = 2,
) -> CreationPolicy:
    """
    A few creation rules keyed on the member set of `initial` and a
    random action of one of its members.
    """
    members = sorted(initial.ids)
    if not members:
        return CreationPolicy()
    others = sorted(set(registry) - set(members))
    chosen: List[PolicyRule] = []
    for _ in range(rules):
        owner = rng.choice(members)
        actions = sorted(registry[owner].actions())
        if not actions or not others:
            break
        create = rng.sample(others, rng.randint(1, min(2, len(others))))
        chosen.append(PolicyRule.of(members, rng.choice(actions), create))
    return CreationPolicy(tuple(chosen))


def random_seed_for(base: int, index: int) -> int:
    return base * 1000003 + index
