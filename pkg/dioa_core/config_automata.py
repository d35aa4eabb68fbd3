"""
Configuration Automata Module

Generation of configuration automata from an initial configuration and a
creation policy, the four CA constraints, and CA composition, hiding and
renaming.
"""

import itertools
import logging
from collections import deque
from dataclasses import dataclass
from typing import (
    Any,
    Dict,
    FrozenSet,
    Iterable,
    List,
    Mapping,
    Optional,
    Sequence,
    Set,
    Tuple,
)

from dioa_core.algebra import (
    Renaming,
    compose_sioa,
    hide_sioa,
    rename_sioa,
    signature_conflict,
)
from dioa_core.configuration import (
    Configuration,
    Registry,
    config_compatible,
    intrinsic_signature,
    intrinsic_successors,
    is_reduced,
)
from dioa_core.sioa import (
    Action,
    DioaError,
    Signature,
    Sioa,
    StateId,
    ValidationReport,
    Violation,
    sorted_states,
    state_text,
)

logger = logging.getLogger(__name__)


class CAError(DioaError):
    """Base exception for configuration automaton errors."""
    pass


class PolicyError(CAError):
    """Raised when a creation policy references unknown automata."""
    pass


class CACompatibilityError(CAError):
    """Raised when configuration automata cannot be composed."""
    def __init__(self, message: str, clause: int, witness: Tuple):
        super().__init__(message)
        self.clause = clause
        self.witness = witness


@dataclass(frozen=True)
class PolicyRule:
    """Creates `create` when `action` runs in a configuration matching the pattern."""
    config_members: FrozenSet[str]
    action: Action
    create: FrozenSet[str]
    state_constraints: Tuple[Tuple[str, StateId], ...] = ()

    @classmethod
    def of(
        cls,
        config_members: Iterable[str],
        action: Action,
        create: Iterable[str],
        state_constraints: Optional[Mapping[str, StateId]] = None,
    ) -> "PolicyRule":
        constraints = tuple(sorted((state_constraints or {}).items()))
        return cls(frozenset(config_members), action, frozenset(create), constraints)

    def matches(self, config: Configuration, action: Action) -> bool:
        if action != self.action or config.ids != self.config_members:
            return False
        return all(config.state_of(aut_id) == state for aut_id, state in self.state_constraints)


@dataclass(frozen=True)
class CreationPolicy:
    """created(x)(a) as the union of the create sets of all matching rules."""
    rules: Tuple[PolicyRule, ...] = ()

    def lookup(self, config: Configuration, action: Action) -> FrozenSet[str]:
        created: FrozenSet[str] = frozenset()
        for rule in self.rules:
            if rule.matches(config, action):
                created = created | rule.create
        return created

    def referenced(self) -> FrozenSet[str]:
        ids: FrozenSet[str] = frozenset()
        for rule in self.rules:
            ids = ids | rule.create | rule.config_members
        return ids

    def check(self, registry: Registry) -> None:
        """
        Raises:
            PolicyError: If a rule mentions an unregistered automaton
        """
        unknown = sorted(aut_id for aut_id in self.referenced() if aut_id not in registry)
        if unknown:
            raise PolicyError(f"Creation policy references unknown automata: {unknown}")


@dataclass(frozen=True)
class ConfigAutomaton:
    """
    An SIOA with a configuration per state and a create set per
    (state, action). States in `frontier` were not expanded.
    """
    underlying: Sioa
    config_map: Mapping[StateId, Configuration]
    created_map: Mapping[Tuple[StateId, Action], FrozenSet[str]]
    registry: Registry
    frontier: FrozenSet[StateId] = frozenset()

    def __hash__(self) -> int:
        return hash(self.underlying)

    @property
    def aut_id(self) -> str:
        return self.underlying.aut_id

    @property
    def states(self) -> FrozenSet[StateId]:
        return self.underlying.states

    def config(self, state: StateId) -> Configuration:
        return self.config_map[state]

    def created(self, state: StateId, action: Action) -> FrozenSet[str]:
        return self.created_map.get((state, action), frozenset())

    def signature(self, state: StateId) -> Signature:
        return self.underlying.signature(state)

    def creators(self) -> FrozenSet[str]:
        """Every id occurring in some create set."""
        ids: FrozenSet[str] = frozenset()
        for created in self.created_map.values():
            ids = ids | created
        return ids


def _check_initial(config: Configuration) -> None:
    if not is_reduced(config):
        raise CAError(f"Initial configuration {config} is not reduced")
    if not config_compatible(config):
        raise CAError(f"Initial configuration {config} is not compatible")
    for aut_id, state in config.members:
        if state not in config.automaton(aut_id).starts:
            raise CAError(
                f"Member {aut_id} of initial configuration {config} is not in a start state"
            )


def generate_ca(
    name: str,
    initial: Iterable[Configuration],
    policy: CreationPolicy,
    registry: Registry,
    depth: int,
) -> ConfigAutomaton:
    """
    Generates the canonical CA whose states are the reachable configurations.

    Args:
        name: Identifier of the underlying automaton
        initial: Start configurations (reduced, compatible, members in start states)
        policy: Creation policy giving created(x)(a)
        registry: Automata that may occur as members
        depth: Number of transition layers to expand

    Returns:
        The generated CA; unexpanded states are listed in `frontier`

    Raises:
        PolicyError: If the policy references unknown automata
        CAError: If an initial configuration is not admissible
    """
    policy.check(registry)
    starts = [c.with_registry(registry) for c in initial]
    if not starts:
        raise CAError("At least one initial configuration is required")
    for config in starts:
        _check_initial(config)

    sig: Dict[StateId, Signature] = {}
    steps: Set[Tuple[StateId, Action, StateId]] = set()
    created_map: Dict[Tuple[StateId, Action], FrozenSet[str]] = {}
    layer_of: Dict[Configuration, int] = {}
    queue = deque()
    for config in sorted(set(starts), key=str):
        layer_of[config] = 0
        queue.append(config)

    frontier: Set[Configuration] = set()
    while queue:
        config = queue.popleft()
        signature = intrinsic_signature(config)
        sig[config] = signature
        for action in sorted(signature.acts):
            created = policy.lookup(config, action)
            if created:
                created_map[(config, action)] = created
        if layer_of[config] >= depth:
            frontier.add(config)
            continue
        for action in sorted(signature.acts):
            created = created_map.get((config, action), frozenset())
            for target in intrinsic_successors(config, action, created, registry):
                steps.add((config, action, target))
                if target not in layer_of:
                    layer_of[target] = layer_of[config] + 1
                    queue.append(target)

    underlying = Sioa(
        aut_id=name,
        states=frozenset(sig),
        starts=frozenset(starts),
        sig=sig,
        steps=frozenset(steps),
    )
    logger.info(
        "Generated CA %s: %d states, %d steps, %d frontier",
        name,
        len(sig),
        len(steps),
        len(frontier),
    )
    return ConfigAutomaton(
        underlying=underlying,
        config_map={config: config for config in sig},
        created_map=created_map,
        registry=dict(registry),
        frontier=frozenset(frontier),
    )


def validate_ca(ca: ConfigAutomaton) -> ValidationReport:
    """
    Checks the four CA constraints on every non-frontier state.

    Tags: CA1 start configurations, CA2 soundness, CA3 completeness,
    CA4 signature relations, STRUCT for unmapped or ill-formed states.
    """
    violations: List[Violation] = []
    aut = ca.underlying

    for x in sorted_states(aut.starts):
        config = ca.config_map.get(x)
        if config is None:
            continue
        for aut_id, state in config.members:
            if state not in config.automaton(aut_id).starts:
                violations.append(
                    Violation("CA1", state_text(x), f"{aut_id}@{state_text(state)} is not a start state")
                )

    for x in sorted_states(aut.states):
        if x not in ca.config_map:
            violations.append(Violation("STRUCT", state_text(x), "state has no configuration"))
            continue
        if x in ca.frontier:
            continue
        config = ca.config_map[x]
        if not is_reduced(config) or not config_compatible(config):
            violations.append(
                Violation("STRUCT", state_text(x), f"{config} is not reduced and compatible")
            )
            continue
        own = aut.signature(x)
        intrinsic = intrinsic_signature(config)
        where = state_text(x)
        if not own.outputs <= intrinsic.outputs:
            violations.append(Violation("CA4", where, "(a) outputs exceed the configuration's"))
        if own.inputs != intrinsic.inputs:
            violations.append(Violation("CA4", where, "(b) inputs differ from the configuration's"))
        if not own.internals >= intrinsic.internals:
            violations.append(Violation("CA4", where, "(c) internals miss some of the configuration's"))
        if own.locally_controlled != intrinsic.locally_controlled:
            violations.append(
                Violation("CA4", where, "(d) outputs and internals differ from the configuration's")
            )

        moves = aut.moves(x)
        for action, y in moves:
            if y not in ca.config_map:
                continue
            allowed = intrinsic_successors(config, action, ca.created(x, action), ca.registry)
            if ca.config_map[y] not in allowed:
                violations.append(
                    Violation(
                        "CA2",
                        f"({where},{action},{state_text(y)})",
                        "step is not an intrinsic transition",
                    )
                )
        for action in sorted(intrinsic.acts):
            targets = {ca.config_map.get(y) for act, y in moves if act == action}
            for successor in intrinsic_successors(config, action, ca.created(x, action), ca.registry):
                if successor not in targets:
                    violations.append(
                        Violation(
                            "CA3",
                            f"({where},{action})",
                            f"intrinsic transition to {successor} has no matching step",
                        )
                    )
    report = ValidationReport(tuple(violations))
    logger.debug("validate_ca %s: %d violations", ca.aut_id, len(violations))
    return report


def _union_config(configs: Sequence[Configuration], registry: Registry) -> Configuration:
    members: List[Tuple[str, StateId]] = []
    for config in configs:
        members.extend(config.members)
    return Configuration(tuple(sorted(members, key=lambda p: p[0])), registry)


def compose_ca(cas: Sequence[ConfigAutomaton], name: Optional[str] = None) -> ConfigAutomaton:
    """
    Composes compatible configuration automata.

    A single automaton is returned unchanged.

    Raises:
        CACompatibilityError: With the clause number and the state tuple
    """
    if not cas:
        raise CAError("Cannot compose an empty family")
    if len(cas) == 1:
        return cas[0]
    registry: Dict[str, Sioa] = {}
    for ca in cas:
        registry.update(ca.registry)

    ordered = [sorted_states(ca.states) for ca in cas]
    config_map: Dict[StateId, Configuration] = {}
    created_map: Dict[Tuple[StateId, Action], FrozenSet[str]] = {}
    frontier: Set[StateId] = set()
    for combo in itertools.product(*ordered):
        configs = [ca.config(x) for ca, x in zip(cas, combo)]
        seen: Set[str] = set()
        for config in configs:
            shared = seen & config.ids
            if shared:
                raise CACompatibilityError(
                    f"Member ids {sorted(shared)} occur in two automata at {state_text(combo)}",
                    1,
                    combo,
                )
            seen |= config.ids
        union = _union_config(configs, registry)
        if not is_reduced(union) or not config_compatible(union):
            raise CACompatibilityError(
                f"Union configuration {union} is not reduced and compatible", 2, combo
            )
        sigs = [ca.signature(x) for ca, x in zip(cas, combo)]
        conflict = signature_conflict(sigs)
        if conflict is not None:
            raise CACompatibilityError(
                f"State signatures are not compatible at {state_text(combo)}: {conflict[2]}",
                3,
                combo,
            )
        for i, j in itertools.combinations(range(len(cas)), 2):
            for action in sorted(sigs[i].acts & sigs[j].acts):
                clash = cas[i].created(combo[i], action) & cas[j].created(combo[j], action)
                if clash:
                    raise CACompatibilityError(
                        f"Both automata create {sorted(clash)} on '{action}' at {state_text(combo)}",
                        4,
                        combo,
                    )
        state = tuple(combo)
        config_map[state] = union
        for action in sorted(frozenset().union(*[s.acts for s in sigs])):
            created: FrozenSet[str] = frozenset()
            for ca, x, s in zip(cas, combo, sigs):
                if action in s.acts:
                    created = created | ca.created(x, action)
            if created:
                created_map[(state, action)] = created
        if any(x in ca.frontier for ca, x in zip(cas, combo)):
            frontier.add(state)

    underlying = compose_sioa([ca.underlying for ca in cas], aut_id=name)
    return ConfigAutomaton(
        underlying=underlying,
        config_map=config_map,
        created_map=created_map,
        registry=registry,
        frontier=frozenset(frontier),
    )


def hide_ca(ca: ConfigAutomaton, hidden: Iterable[Action], name: Optional[str] = None) -> ConfigAutomaton:
    """Hides outputs of the underlying automaton; configurations are untouched."""
    return ConfigAutomaton(
        underlying=hide_sioa(ca.underlying, hidden, aut_id=name),
        config_map=ca.config_map,
        created_map=ca.created_map,
        registry=ca.registry,
        frontier=ca.frontier,
    )


def rename_ca(
    ca: ConfigAutomaton,
    renaming: Renaming,
    ids: Optional[Mapping[str, str]] = None,
    name: Optional[str] = None,
) -> ConfigAutomaton:
    """
    Renames actions of a CA and of every member automaton.

    Args:
        ca: Configuration automaton
        renaming: Injective renaming covering every member action
        ids: New identifiers for renamed member automata (default: unchanged)
        name: Identifier of the renamed underlying automaton

    Raises:
        RenamingError: If some member action is not covered
    """
    ids = dict(ids or {})
    underlying = rename_sioa(ca.underlying, renaming, aut_id=name)
    used: Set[str] = set(ca.creators())
    for config in ca.config_map.values():
        used |= config.ids
    registry: Dict[str, Sioa] = {}
    for old_id in sorted(used):
        new_id = ids.get(old_id, old_id)
        registry[new_id] = rename_sioa(ca.registry[old_id], renaming, aut_id=new_id)

    def rename_config(config: Configuration) -> Configuration:
        return Configuration(
            tuple(sorted(((ids.get(a, a), s) for a, s in config.members), key=lambda p: p[0])),
            registry,
        )

    table = renaming.as_dict()
    config_map = {x: rename_config(c) for x, c in ca.config_map.items()}
    created_map = {
        (x, table[a]): frozenset(ids.get(i, i) for i in created)
        for (x, a), created in ca.created_map.items()
    }
    return ConfigAutomaton(
        underlying=underlying,
        config_map=config_map,
        created_map=created_map,
        registry=registry,
        frontier=ca.frontier,
    )


def as_member(ca: ConfigAutomaton, aut_id: Optional[str] = None) -> Sioa:
    """The underlying SIOA of a CA, ready to be registered in another CA."""
    return ca.underlying.with_id(aut_id) if aut_id else ca.underlying


def ca_states_text(ca: ConfigAutomaton) -> List[Dict[str, Any]]:
    """Per-state `config:` and `created:` annotations in canonical order."""
    rows: List[Dict[str, Any]] = []
    for x in sorted_states(ca.states):
        signature = ca.signature(x)
        created = {
            a: sorted(ca.created(x, a)) for a in sorted(signature.acts) if ca.created(x, a)
        }
        rows.append(
            {
                "state": state_text(x),
                "config": str(ca.config(x)),
                "created": created,
                "frontier": x in ca.frontier,
                "signature": signature.text(),
            }
        )
    return rows
