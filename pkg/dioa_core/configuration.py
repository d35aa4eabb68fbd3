"""
Configuration Module

Configurations (sets of live automata with their current states), their
intrinsic signature, reduction, and intrinsic transitions with creation.
"""

import itertools
import logging
from dataclasses import dataclass, field
from typing import (
    Dict,
    FrozenSet,
    Iterable,
    Iterator,
    List,
    Mapping,
    Optional,
    Tuple,
    Union,
)

from dioa_core.algebra import compose_signatures, signature_conflict
from dioa_core.sioa import (
    Action,
    DioaError,
    ExtSig,
    Signature,
    Sioa,
    StateId,
    UnknownStateError,
    sorted_states,
    state_text,
)

logger = logging.getLogger(__name__)

Registry = Mapping[str, Sioa]


class ConfigurationError(DioaError):
    """Base exception for configuration errors."""
    pass


class UnknownAutomatonError(ConfigurationError):
    """Raised when an automaton id is not in the registry."""
    def __init__(self, aut_id: str):
        super().__init__(f"Automaton '{aut_id}' is not registered")
        self.aut_id = aut_id


class IncompatibleConfigurationError(ConfigurationError):
    """Raised when the members of a configuration have incompatible signatures."""
    def __init__(self, message: str, pair: Tuple[str, str]):
        super().__init__(message)
        self.pair = pair


@dataclass(frozen=True)
class Configuration:
    """
    Finite set of (automaton id, state) pairs, sorted by id.

    The registry resolves ids to automata; it does not take part in
    equality or hashing, so configurations can serve as automaton states.
    """
    members: Tuple[Tuple[str, StateId], ...] = ()
    registry: Registry = field(default_factory=dict, compare=False, repr=False)

    @classmethod
    def of(
        cls,
        members: Union[Mapping[str, StateId], Iterable[Tuple[str, StateId]]],
        registry: Registry,
    ) -> "Configuration":
        """
        Builds a configuration after checking every id and state.

        Raises:
            UnknownAutomatonError: If an id is not registered
            UnknownStateError: If a state is not a state of its automaton
        """
        pairs = list(members.items()) if isinstance(members, Mapping) else list(members)
        ids = [aut_id for aut_id, _ in pairs]
        if len(set(ids)) != len(ids):
            raise ConfigurationError(f"Duplicate member ids in {sorted(ids)}")
        for aut_id, state in pairs:
            if aut_id not in registry:
                raise UnknownAutomatonError(aut_id)
            if state not in registry[aut_id].states:
                raise UnknownStateError(aut_id, state)
        return cls(tuple(sorted(pairs, key=lambda p: p[0])), registry)

    @property
    def ids(self) -> FrozenSet[str]:
        return frozenset(aut_id for aut_id, _ in self.members)

    def __contains__(self, aut_id: object) -> bool:
        return any(aut_id == member for member, _ in self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[Tuple[str, StateId]]:
        return iter(self.members)

    def state_of(self, aut_id: str) -> StateId:
        for member, state in self.members:
            if member == aut_id:
                return state
        raise KeyError(aut_id)

    def automaton(self, aut_id: str) -> Sioa:
        if aut_id not in self.registry:
            raise UnknownAutomatonError(aut_id)
        return self.registry[aut_id]

    def signature_of(self, aut_id: str) -> Signature:
        return self.automaton(aut_id).signature(self.state_of(aut_id))

    def signatures(self) -> List[Signature]:
        return [self.automaton(aut_id).signature(state) for aut_id, state in self.members]

    def replace_members(self, members: Iterable[Tuple[str, StateId]]) -> "Configuration":
        return Configuration(tuple(sorted(members, key=lambda p: p[0])), self.registry)

    def with_registry(self, registry: Registry) -> "Configuration":
        return Configuration(self.members, registry)

    def text(self) -> str:
        return "[" + ", ".join(f"{aut_id}@{state_text(s)}" for aut_id, s in self.members) + "]"

    def __str__(self) -> str:
        return self.text()


def config_conflict(config: Configuration) -> Optional[Tuple[str, str]]:
    """First pair of member ids whose signatures are incompatible, if any."""
    conflict = signature_conflict(config.signatures())
    if conflict is None:
        return None
    i, j, _ = conflict
    return config.members[i][0], config.members[j][0]


def config_compatible(config: Configuration) -> bool:
    return config_conflict(config) is None


def intrinsic_signature(config: Configuration) -> Signature:
    """
    Intrinsic signature of a compatible configuration.

    Raises:
        IncompatibleConfigurationError: If two members are incompatible
    """
    pair = config_conflict(config)
    if pair is not None:
        raise IncompatibleConfigurationError(
            f"Members {pair[0]} and {pair[1]} of {config} are not compatible", pair
        )
    return compose_signatures(config.signatures())


def intrinsic_ext(config: Configuration) -> ExtSig:
    return intrinsic_signature(config).external


def reduce_config(config: Configuration) -> Configuration:
    """Drops every member whose current signature is empty."""
    kept = [
        (aut_id, state)
        for aut_id, state in config.members
        if not config.automaton(aut_id).is_destroyed(state)
    ]
    if len(kept) == len(config.members):
        return config
    return Configuration(tuple(kept), config.registry)


def is_reduced(config: Configuration) -> bool:
    return reduce_config(config) == config


def intrinsic_successors(
    config: Configuration,
    action: Action,
    created: Iterable[str] = (),
    registry: Optional[Registry] = None,
) -> Tuple[Configuration, ...]:
    """
    All D with config --action, created--> D.

    Newly created automata start in any of their start states and do not
    take the action. Every existing member with the action in its signature
    takes some step on it, the others keep their state. Candidates whose
    pre-reduction configuration is incompatible are discarded.

    Args:
        config: Reduced, compatible source configuration
        action: Action to execute
        created: Create set φ
        registry: Registry resolving φ (defaults to the configuration's)

    Returns:
        Reduced compatible successors in canonical order (empty when the
        action is not in the intrinsic signature)

    Raises:
        UnknownAutomatonError: If an id of φ cannot be resolved
    """
    registry = registry if registry is not None else config.registry
    phi = sorted(set(created))
    for aut_id in phi:
        if aut_id not in registry:
            raise UnknownAutomatonError(aut_id)
    merged: Dict[str, Sioa] = dict(registry)
    merged.update(config.registry)
    if action not in intrinsic_signature(config).acts:
        return ()

    ids: List[str] = []
    choices: List[Tuple[StateId, ...]] = []
    for aut_id, state in config.members:
        automaton = merged[aut_id]
        ids.append(aut_id)
        if action in automaton.acts(state):
            choices.append(automaton.successors(state, action))
        else:
            choices.append((state,))
    for aut_id in phi:
        if aut_id in config:
            continue
        ids.append(aut_id)
        choices.append(tuple(sorted_states(merged[aut_id].starts)))

    results = set()
    for combo in itertools.product(*choices):
        candidate = Configuration(tuple(sorted(zip(ids, combo), key=lambda p: p[0])), merged)
        if not config_compatible(candidate):
            continue
        results.add(reduce_config(candidate))
    return tuple(sorted(results, key=str))


def destruction_nondeterminism(automaton: Sioa) -> List[Tuple[StateId, Action]]:
    """
    Lists (state, action) pairs that lead both to empty and to non-empty
    signatures, i.e. where the action alone does not decide destruction.
    """
    offending: List[Tuple[StateId, Action]] = []
    for state in sorted_states(automaton.states):
        by_action: Dict[Action, List[bool]] = {}
        for action, target in automaton.moves(state):
            by_action.setdefault(action, []).append(automaton.is_destroyed(target))
        for action in sorted(by_action):
            outcomes = set(by_action[action])
            if len(outcomes) == 2:
                offending.append((state, action))
    if offending:
        logger.warning(
            "Automaton %s: destruction is not determined by the action at %s",
            automaton.aut_id,
            ", ".join(f"({state_text(s)},{a})" for s, a in offending),
        )
    return offending
