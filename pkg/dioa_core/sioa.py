"""
SIOA Module

Signatures, signature I/O automata and their well-formedness check.

An automaton is stored extensionally: a finite state set, its start states,
one signature per state and the transition relation. State ids are text
tokens in model files; composition produces tuples of component ids and
configuration automata use configurations as states, so the code only
relies on states being hashable and renders them with `state_text`.
"""

import logging
from dataclasses import dataclass, field, replace
from typing import (
    Any,
    Dict,
    FrozenSet,
    Hashable,
    Iterable,
    List,
    Mapping,
    Optional,
    Tuple,
)

logger = logging.getLogger(__name__)

Action = str
StateId = Hashable
Step = Tuple[StateId, Action, StateId]


class DioaError(Exception):
    """Base exception for every error raised by dioa_core."""
    pass


class ModelError(DioaError):
    """Raised when an automaton is used outside its definition."""
    pass


class UnknownStateError(ModelError):
    """Raised when a state id is not a state of the automaton."""
    def __init__(self, aut_id: str, state: Any):
        super().__init__(f"Unknown state {state_text(state)!r} of automaton '{aut_id}'")
        self.aut_id = aut_id
        self.state = state


def state_text(state: Any) -> str:
    """Renders a state id canonically: tokens as-is, tuples as `(s1,s2)`."""
    if isinstance(state, str):
        return state
    if isinstance(state, tuple):
        return "(" + ",".join(state_text(part) for part in state) + ")"
    return str(state)


def sorted_states(states: Iterable[StateId]) -> List[StateId]:
    return sorted(states, key=state_text)


def _set_text(actions: Iterable[Action]) -> str:
    return ",".join(sorted(actions))


@dataclass(frozen=True)
class ExtSig:
    """External signature: the (input, output) pair of a state."""
    inputs: FrozenSet[Action] = frozenset()
    outputs: FrozenSet[Action] = frozenset()

    @property
    def acts(self) -> FrozenSet[Action]:
        return self.inputs | self.outputs

    def text(self) -> str:
        return "{" + _set_text(self.inputs) + "|" + _set_text(self.outputs) + "}"

    def __str__(self) -> str:
        return self.text()


@dataclass(frozen=True)
class Signature:
    """Input, output and internal action sets of one state."""
    inputs: FrozenSet[Action] = frozenset()
    outputs: FrozenSet[Action] = frozenset()
    internals: FrozenSet[Action] = frozenset()

    @classmethod
    def of(
        cls,
        inputs: Iterable[Action] = (),
        outputs: Iterable[Action] = (),
        internals: Iterable[Action] = (),
    ) -> "Signature":
        return cls(frozenset(inputs), frozenset(outputs), frozenset(internals))

    @property
    def acts(self) -> FrozenSet[Action]:
        """All actions of the signature (in ∪ out ∪ int)."""
        return self.inputs | self.outputs | self.internals

    @property
    def locally_controlled(self) -> FrozenSet[Action]:
        return self.outputs | self.internals

    @property
    def external(self) -> ExtSig:
        return ExtSig(self.inputs, self.outputs)

    def is_empty(self) -> bool:
        return not (self.inputs or self.outputs or self.internals)

    def is_disjoint(self) -> bool:
        return (
            not (self.inputs & self.outputs)
            and not (self.inputs & self.internals)
            and not (self.outputs & self.internals)
        )

    def text(self) -> str:
        return (
            "<" + _set_text(self.inputs) + "|" + _set_text(self.outputs)
            + "|" + _set_text(self.internals) + ">"
        )

    def __str__(self) -> str:
        return self.text()


EMPTY_SIGNATURE = Signature()


@dataclass(frozen=True)
class Sioa:
    """
    Explicit finite signature I/O automaton.

    `components` is filled by composition so that executions over the
    composite can be projected back onto each component.
    """
    aut_id: str
    states: FrozenSet[StateId]
    starts: FrozenSet[StateId]
    sig: Mapping[StateId, Signature]
    steps: FrozenSet[Step]
    components: Tuple["Sioa", ...] = ()
    _succ: Dict[StateId, Tuple[Tuple[Action, StateId], ...]] = field(
        init=False, repr=False, compare=False
    )

    def __post_init__(self) -> None:
        index: Dict[StateId, List[Tuple[Action, StateId]]] = {}
        for src, action, dst in self.steps:
            index.setdefault(src, []).append((action, dst))
        frozen = {
            src: tuple(sorted(moves, key=lambda m: (m[0], state_text(m[1]))))
            for src, moves in index.items()
        }
        object.__setattr__(self, "_succ", frozen)

    def __hash__(self) -> int:
        return hash((self.aut_id, self.states, self.starts, self.steps))

    def signature(self, state: StateId) -> Signature:
        if state not in self.states:
            raise UnknownStateError(self.aut_id, state)
        return self.sig.get(state, EMPTY_SIGNATURE)

    def ext(self, state: StateId) -> ExtSig:
        return self.signature(state).external

    def acts(self, state: StateId) -> FrozenSet[Action]:
        return self.signature(state).acts

    def actions(self) -> FrozenSet[Action]:
        """Every action occurring in some state signature."""
        result: FrozenSet[Action] = frozenset()
        for signature in self.sig.values():
            result = result | signature.acts
        return result

    def moves(self, state: StateId) -> Tuple[Tuple[Action, StateId], ...]:
        """Outgoing (action, target) pairs of a state in canonical order."""
        return self._succ.get(state, ())

    def successors(self, state: StateId, action: Action) -> Tuple[StateId, ...]:
        return tuple(dst for act, dst in self._succ.get(state, ()) if act == action)

    def is_destroyed(self, state: StateId) -> bool:
        """True when the state's signature is empty (self-destruction)."""
        return self.signature(state).is_empty()

    def with_starts(self, starts: Iterable[StateId]) -> "Sioa":
        return replace(self, starts=frozenset(starts))

    def with_id(self, aut_id: str) -> "Sioa":
        return replace(self, aut_id=aut_id)


def make_sioa(
    aut_id: str,
    sig: Mapping[StateId, Signature],
    steps: Iterable[Step],
    starts: Iterable[StateId],
    states: Optional[Iterable[StateId]] = None,
) -> Sioa:
    """
    Builds an automaton; the state set defaults to the keys of `sig`.

    Args:
        aut_id: Automaton identifier
        sig: Signature of every state
        steps: (source, action, target) triples
        starts: Start states
        states: Explicit state set, if it differs from the keys of `sig`

    Returns:
        The (unvalidated) automaton
    """
    state_set = frozenset(states) if states is not None else frozenset(sig)
    return Sioa(
        aut_id=aut_id,
        states=state_set,
        starts=frozenset(starts),
        sig=dict(sig),
        steps=frozenset(steps),
    )


@dataclass(frozen=True)
class Violation:
    """One failed constraint: tag is C1, C2, C3 or STRUCT."""
    tag: str
    where: str
    message: str

    def __str__(self) -> str:
        return f"[{self.tag}] {self.where}: {self.message}"


@dataclass(frozen=True)
class ValidationReport:
    violations: Tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def tags(self) -> FrozenSet[str]:
        return frozenset(v.tag for v in self.violations)

    def summary(self) -> str:
        if self.ok:
            return "ok"
        return "\n".join(str(v) for v in self.violations)


def validate_sioa(candidate: Sioa) -> ValidationReport:
    """
    Checks the structural requirements and constraints C1-C3.

    Args:
        candidate: Automaton to check (may be ill-formed)

    Returns:
        Report listing every violation with its witnessing state or step
    """
    violations: List[Violation] = []
    name = candidate.aut_id

    if not candidate.starts:
        violations.append(Violation("STRUCT", name, "empty start set"))
    for start in sorted_states(candidate.starts - candidate.states):
        violations.append(
            Violation("STRUCT", state_text(start), "start state is not declared")
        )
    for state in sorted_states(candidate.states):
        if state not in candidate.sig:
            violations.append(
                Violation("STRUCT", state_text(state), "state has no signature")
            )
    for state in sorted_states(set(candidate.sig) - set(candidate.states)):
        violations.append(
            Violation("STRUCT", state_text(state), "signature given for undeclared state")
        )

    ordered_steps = sorted(
        candidate.steps, key=lambda st: (state_text(st[0]), st[1], state_text(st[2]))
    )
    for src, action, dst in ordered_steps:
        where = f"({state_text(src)},{action},{state_text(dst)})"
        if src not in candidate.states or dst not in candidate.states:
            violations.append(Violation("STRUCT", where, "step uses an undeclared state"))
            continue
        if action not in candidate.sig.get(src, EMPTY_SIGNATURE).acts:
            violations.append(
                Violation("C1", where, f"action '{action}' is not in the source signature")
            )

    for state in sorted_states(candidate.states):
        signature = candidate.sig.get(state)
        if signature is None:
            continue
        if not signature.is_disjoint():
            violations.append(
                Violation("C3", state_text(state), f"signature {signature} is not disjoint")
            )
        enabled = {act for act, _ in candidate.moves(state)}
        for action in sorted(signature.inputs - enabled):
            violations.append(
                Violation(
                    "C2",
                    f"({state_text(state)},{action})",
                    "input action is not enabled",
                )
            )

    report = ValidationReport(tuple(violations))
    if not report.ok:
        logger.debug("Automaton %s has %d violations", name, len(violations))
    return report


def enabled_steps(automaton: Sioa, state: StateId) -> Tuple[Tuple[Action, StateId], ...]:
    """
    Returns the (action, target) pairs leaving `state`, canonically ordered.

    Raises:
        UnknownStateError: If the state does not belong to the automaton
    """
    if state not in automaton.states:
        raise UnknownStateError(automaton.aut_id, state)
    return automaton.moves(state)
