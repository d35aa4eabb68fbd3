"""
Algebra Module

Signature compatibility and composition, n-ary SIOA composition,
action hiding and injective action renaming.
"""

import itertools
import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

from dioa_core.sioa import (
    Action,
    ModelError,
    Signature,
    Sioa,
    StateId,
    Step,
    sorted_states,
    state_text,
)

logger = logging.getLogger(__name__)


class AlgebraError(ModelError):
    """Base exception for operator errors."""
    pass


class IncompatibleError(AlgebraError):
    """Raised when signatures or automata are not compatible."""
    def __init__(self, message: str, witness: Optional[Tuple] = None):
        super().__init__(message)
        self.witness = witness


class RenamingError(AlgebraError):
    """Raised for a non-injective renaming or one that misses some actions."""
    def __init__(self, message: str, kind: str, actions: Iterable[Action] = ()):
        super().__init__(message)
        self.kind = kind
        self.actions = tuple(sorted(actions))


@dataclass(frozen=True)
class Renaming:
    """Injective action renaming ρ."""
    mapping: Tuple[Tuple[Action, Action], ...]

    def __post_init__(self) -> None:
        images: Dict[Action, Action] = {}
        for src, dst in self.mapping:
            if dst in images and images[dst] != src:
                raise RenamingError(
                    f"Renaming is not injective: '{images[dst]}' and '{src}' both map to '{dst}'",
                    kind="injectivity",
                    actions=(images[dst], src),
                )
            images[dst] = src

    @classmethod
    def of(cls, mapping: Mapping[Action, Action]) -> "Renaming":
        return cls(tuple(sorted(mapping.items())))

    @classmethod
    def identity(cls, actions: Iterable[Action]) -> "Renaming":
        return cls(tuple((a, a) for a in sorted(set(actions))))

    @property
    def domain(self) -> FrozenSet[Action]:
        return frozenset(src for src, _ in self.mapping)

    def as_dict(self) -> Dict[Action, Action]:
        return dict(self.mapping)

    def apply(self, action: Action) -> Action:
        return self.as_dict()[action]

    def apply_set(self, actions: Iterable[Action]) -> FrozenSet[Action]:
        table = self.as_dict()
        return frozenset(table[a] for a in actions)

    def apply_signature(self, signature: Signature) -> Signature:
        return Signature(
            self.apply_set(signature.inputs),
            self.apply_set(signature.outputs),
            self.apply_set(signature.internals),
        )

    def extended(self, actions: Iterable[Action]) -> "Renaming":
        """Adds identity entries for actions outside the domain."""
        table = self.as_dict()
        for action in actions:
            table.setdefault(action, action)
        return Renaming.of(table)

    def inverse(self) -> "Renaming":
        return Renaming.of({dst: src for src, dst in self.mapping})


def _pair_conflict(left: Signature, right: Signature) -> Optional[str]:
    shared_out = left.outputs & right.outputs
    if shared_out:
        return f"shared outputs {sorted(shared_out)}"
    internal_clash = (left.acts & right.internals) | (right.acts & left.internals)
    if internal_clash:
        return f"internal actions {sorted(internal_clash)} shared"
    return None


def signature_conflict(sigs: Sequence[Signature]) -> Optional[Tuple[int, int, str]]:
    """Returns the first incompatible pair (i, j, reason), if any."""
    for i, j in itertools.combinations(range(len(sigs)), 2):
        reason = _pair_conflict(sigs[i], sigs[j])
        if reason is not None:
            return i, j, reason
    return None


def compatible_signatures(sigs: Sequence[Signature]) -> bool:
    """True iff no two signatures share outputs and no internal action is shared."""
    return signature_conflict(sigs) is None


def compose_signatures(sigs: Sequence[Signature]) -> Signature:
    """
    Composes compatible signatures.

    Args:
        sigs: Signatures to compose

    Returns:
        Signature with in = ∪in − ∪out, out = ∪out, int = ∪int

    Raises:
        IncompatibleError: Naming the first incompatible pair
    """
    conflict = signature_conflict(sigs)
    if conflict is not None:
        i, j, reason = conflict
        raise IncompatibleError(
            f"Signatures {i} and {j} are not compatible: {reason}", witness=(i, j)
        )
    inputs: FrozenSet[Action] = frozenset()
    outputs: FrozenSet[Action] = frozenset()
    internals: FrozenSet[Action] = frozenset()
    for signature in sigs:
        inputs |= signature.inputs
        outputs |= signature.outputs
        internals |= signature.internals
    return Signature(inputs - outputs, outputs, internals)


def incompatibility_witness(autos: Sequence[Sioa]) -> Optional[Tuple[StateId, ...]]:
    """
    Searches the full state product for a tuple with incompatible signatures.

    Returns:
        The first offending state tuple in canonical order, or None
    """
    ordered = [sorted_states(aut.states) for aut in autos]
    for combo in itertools.product(*ordered):
        sigs = [aut.signature(state) for aut, state in zip(autos, combo)]
        if signature_conflict(sigs) is not None:
            return tuple(combo)
    return None


def compatible_sioa(autos: Sequence[Sioa]) -> bool:
    """True iff the signatures are compatible in every state tuple."""
    return incompatibility_witness(autos) is None


def compose_sioa(autos: Sequence[Sioa], aut_id: Optional[str] = None) -> Sioa:
    """
    Composes a family of automata over the full state product.

    Args:
        autos: Compatible automata, at least one
        aut_id: Identifier of the result (defaults to `A||B||...`)

    Returns:
        Composite automaton whose states are tuples of component states

    Raises:
        IncompatibleError: With the offending state tuple as witness
    """
    if not autos:
        raise AlgebraError("Cannot compose an empty family")
    ids = [aut.aut_id for aut in autos]
    if len(set(ids)) != len(ids):
        raise IncompatibleError(f"Duplicate automaton ids in composition: {ids}")
    witness = incompatibility_witness(autos)
    if witness is not None:
        raise IncompatibleError(
            f"Automata {ids} are not compatible at {state_text(witness)}", witness=witness
        )

    ordered = [sorted_states(aut.states) for aut in autos]
    states = [tuple(combo) for combo in itertools.product(*ordered)]
    sig: Dict[StateId, Signature] = {}
    steps: List[Step] = []
    for state in states:
        locals_ = [aut.signature(s) for aut, s in zip(autos, state)]
        composite = compose_signatures(locals_)
        sig[state] = composite
        for action in sorted(composite.acts):
            choices = []
            for aut, local_sig, local_state in zip(autos, locals_, state):
                if action in local_sig.acts:
                    choices.append(aut.successors(local_state, action))
                else:
                    choices.append((local_state,))
            for target in itertools.product(*choices):
                steps.append((state, action, tuple(target)))

    starts = [tuple(combo) for combo in itertools.product(*[sorted_states(a.starts) for a in autos])]
    result = Sioa(
        aut_id=aut_id or "||".join(ids),
        states=frozenset(states),
        starts=frozenset(starts),
        sig=sig,
        steps=frozenset(steps),
        components=tuple(autos),
    )
    logger.debug("Composed %s: %d states, %d steps", result.aut_id, len(states), len(steps))
    return result


def hide_sioa(automaton: Sioa, hidden: Iterable[Action], aut_id: Optional[str] = None) -> Sioa:
    """
    Turns the outputs in `hidden` into internal actions in every state.

    Actions of `hidden` that the automaton never outputs are ignored.
    """
    sigma = frozenset(hidden)
    sig = {
        state: Signature(
            signature.inputs,
            signature.outputs - sigma,
            signature.internals | (signature.outputs & sigma),
        )
        for state, signature in automaton.sig.items()
    }
    return Sioa(
        aut_id=aut_id or automaton.aut_id,
        states=automaton.states,
        starts=automaton.starts,
        sig=sig,
        steps=automaton.steps,
        components=automaton.components,
    )


def rename_sioa(automaton: Sioa, renaming: Renaming, aut_id: Optional[str] = None) -> Sioa:
    """
    Renames every action of the automaton through an injective renaming.

    Raises:
        RenamingError: If some action of the automaton is outside the domain
    """
    missing = automaton.actions() - renaming.domain
    if missing:
        raise RenamingError(
            f"Renaming does not cover actions {sorted(missing)} of '{automaton.aut_id}'",
            kind="coverage",
            actions=missing,
        )
    table = renaming.as_dict()
    sig = {state: renaming.apply_signature(s) for state, s in automaton.sig.items()}
    steps = frozenset((src, table[act], dst) for src, act, dst in automaton.steps)
    components = tuple(
        rename_sioa(comp, renaming.extended(comp.actions())) for comp in automaton.components
    )
    return Sioa(
        aut_id=aut_id or automaton.aut_id,
        states=automaton.states,
        starts=automaton.starts,
        sig=sig,
        steps=steps,
        components=components,
    )
