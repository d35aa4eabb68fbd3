"""
Explorer Module

Bounded-depth enumeration of executions and traces, trace membership,
and trace inclusion with lexicographically least witnesses.

Every function accepts an SIOA or a configuration automaton; a CA is
explored through its underlying SIOA.
"""

import logging
from collections import deque
from dataclasses import dataclass
from typing import (
    Callable,
    Dict,
    Iterator,
    List,
    Optional,
    Sequence,
    Set,
    Tuple,
    Union,
)

from dioa_core.behavior import (
    Execution,
    Trace,
    format_actions,
    format_trace,
    is_signature,
    trace_sort_key,
)
from dioa_core.config_automata import ConfigAutomaton
from dioa_core.sioa import Action, ExtSig, Sioa, StateId, sorted_states

logger = logging.getLogger(__name__)

Automaton = Union[Sioa, ConfigAutomaton]

FULL = "full"
ACTIONS = "action-only"
MODES = (FULL, ACTIONS)


def as_sioa(automaton: Automaton) -> Sioa:
    if isinstance(automaton, ConfigAutomaton):
        return automaton.underlying
    return automaton


class _Index:
    """Per-state external signatures and (action, target, external) moves."""

    def __init__(self, automaton: Sioa):
        self.automaton = automaton
        self.ext: Dict[StateId, ExtSig] = {
            s: automaton.signature(s).external for s in automaton.states
        }
        self.moves: Dict[StateId, Tuple[Tuple[Action, StateId, bool], ...]] = {}
        for s in automaton.states:
            ext_acts = self.ext[s].acts
            self.moves[s] = tuple(
                (a, t, a in ext_acts) for a, t in automaton.moves(s)
            )
        self.starts = sorted_states(automaton.starts)

    def extend(self, trace: Trace, action: Action, target: StateId, external: bool) -> Trace:
        new_ext = self.ext[target]
        if external:
            return trace + (action, new_ext)
        if trace[-1] == new_ext:
            return trace
        return trace + (new_ext,)


def _check_mode(mode: str) -> None:
    if mode not in MODES:
        raise ValueError(f"Unsupported mode: '{mode}'. Supported: {', '.join(MODES)}")


def enumerate_executions(automaton: Automaton, depth: int) -> Iterator[Execution]:
    """Yields every execution with at most `depth` transitions, depth-first."""
    aut = as_sioa(automaton)
    stack: List[Execution] = [
        Execution(aut.aut_id, (s,)) for s in reversed(sorted_states(aut.starts))
    ]
    while stack:
        alpha = stack.pop()
        yield alpha
        if len(alpha) >= depth:
            continue
        for action, target in reversed(aut.moves(alpha.last_state)):
            stack.append(alpha.extend(action, target))


def enumerate_traces(automaton: Automaton, depth: int, mode: str = FULL) -> List:
    """
    Traces of all executions of length at most `depth`, without duplicates.

    Args:
        automaton: SIOA or CA
        depth: Maximum number of transitions
        mode: "full" for traces, "action-only" for their action projections

    Returns:
        Sorted list of traces (tuples of ExtSig and actions) or of action tuples
    """
    _check_mode(mode)
    index = _Index(as_sioa(automaton))
    if mode == FULL:
        layer = {((index.ext[s],), s) for s in index.starts}
    else:
        layer = {((), s) for s in index.starts}
    seen: Set = set(layer)
    results = {key for key, _ in layer}
    for step in range(depth):
        nxt = set()
        for key, state in layer:
            for action, target, external in index.moves[state]:
                if mode == FULL:
                    new_key = index.extend(key, action, target, external)
                else:
                    new_key = key + (action,) if external else key
                pair = (new_key, target)
                if pair not in seen:
                    seen.add(pair)
                    nxt.add(pair)
                    results.add(new_key)
        logger.debug("enumerate_traces %s layer %d: %d new pairs", index.automaton.aut_id, step + 1, len(nxt))
        layer = nxt
        if not layer:
            break
    logger.info("Enumerated %d %s traces of %s at depth %d", len(results), mode, index.automaton.aut_id, depth)
    if mode == FULL:
        return sorted(results, key=trace_sort_key)
    return sorted(results)


def action_projection_set(traces: Sequence[Trace]) -> List[Tuple[Action, ...]]:
    return sorted({tuple(e for e in t if not is_signature(e)) for t in traces})


@dataclass(frozen=True)
class Membership:
    """Outcome of a trace membership search."""
    accepted: bool
    truncated: bool = False
    execution: Optional[Execution] = None

    def __bool__(self) -> bool:
        return self.accepted


def _rebuild(aut: Sioa, parents: Dict, node) -> Execution:
    states: List[StateId] = []
    actions: List[Action] = []
    while node is not None:
        node, via = parents[node]
        states.append(via[1])
        if via[0] is not None:
            actions.append(via[0])
    states.reverse()
    actions.reverse()
    return Execution(aut.aut_id, tuple(states), tuple(actions))


def _terminating_step(index: _Index, trace: Sequence, pos: int, state: StateId, mode: str) -> Optional[Action]:
    """A final action from `state` that empties the signature and completes `trace`."""
    aut = index.automaton
    length = len(trace)
    for action, target, external in index.moves[state]:
        if not aut.is_destroyed(target):
            continue
        if mode == FULL:
            if external and pos == length - 2 and trace[-1] == action:
                return action
            if not external and pos == length - 1:
                return action
        else:
            if external and pos == length - 1 and trace[-1] == action:
                return action
            if not external and pos == length:
                return action
    return None


def accepts_trace(
    automaton: Automaton,
    trace: Sequence,
    mode: str = FULL,
    max_steps: Optional[int] = None,
    terminating: bool = False,
) -> Membership:
    """
    Decides whether `trace` is the trace of some execution.

    Breadth-first over (position in the trace, state); internal steps that
    keep the external signature do not advance the position.

    Args:
        automaton: SIOA or CA
        trace: Full trace, or action tuple in action-only mode
        mode: "full" or "action-only"
        max_steps: Step budget; None explores the whole finite automaton
        terminating: Accept only executions whose last action empties the
            signature; the state it reaches is not part of the trace

    Returns:
        Membership with a witness execution when accepted, and `truncated`
        set when the budget cut off part of the search
    """
    _check_mode(mode)
    return _accepts(_Index(as_sioa(automaton)), trace, mode, max_steps, terminating)


def trace_acceptor(
    automaton: Automaton,
    mode: str = FULL,
    max_steps: Optional[int] = None,
    terminating: bool = False,
) -> Callable[[Sequence], Membership]:
    """accepts_trace with the arguments other than the trace fixed; indexes the automaton once."""
    _check_mode(mode)
    index = _Index(as_sioa(automaton))
    return lambda trace: _accepts(index, trace, mode, max_steps, terminating)


def _accepts(
    index: _Index,
    trace: Sequence,
    mode: str,
    max_steps: Optional[int] = None,
    terminating: bool = False,
) -> Membership:
    aut = index.automaton
    target_len = len(trace)
    if mode == FULL:
        starts = [s for s in index.starts if index.ext[s] == trace[0]]
        goal = target_len - 1
    else:
        starts = list(index.starts)
        goal = target_len

    parents: Dict = {}
    queue = deque()
    for s in starts:
        node = (0, s)
        if node not in parents:
            parents[node] = (None, (None, s))
            queue.append((node, 0))
    truncated = False
    while queue:
        node, steps = queue.popleft()
        pos, state = node
        if terminating:
            final = _terminating_step(index, trace, pos, state, mode)
            if final is not None:
                alpha = _rebuild(aut, parents, node)
                return Membership(True, truncated, Execution(aut.aut_id, alpha.states, alpha.actions + (final,)))
        elif pos == goal:
            return Membership(True, truncated, _rebuild(aut, parents, node))
        if max_steps is not None and steps >= max_steps:
            if index.moves[state]:
                truncated = True
            continue
        for action, target, external in index.moves[state]:
            nxt = None
            if mode == FULL:
                new_ext = index.ext[target]
                if external:
                    if pos + 2 < target_len and trace[pos + 1] == action and trace[pos + 2] == new_ext:
                        nxt = (pos + 2, target)
                elif new_ext == trace[pos]:
                    nxt = (pos, target)
                elif pos + 1 < target_len and is_signature(trace[pos + 1]) and trace[pos + 1] == new_ext:
                    nxt = (pos + 1, target)
            else:
                if not external:
                    nxt = (pos, target)
                elif pos < target_len and trace[pos] == action:
                    nxt = (pos + 1, target)
            if nxt is not None and nxt not in parents:
                parents[nxt] = (node, (action, target))
                queue.append((nxt, steps + 1))
    return Membership(False, truncated)


@dataclass(frozen=True)
class InclusionResult:
    holds: bool
    witness: Optional[Tuple] = None
    mode: str = FULL
    checked: int = 0
    inconclusive: bool = False

    def __bool__(self) -> bool:
        return self.holds

    def witness_text(self) -> str:
        if self.witness is None:
            return ""
        if self.mode == FULL:
            return format_trace(self.witness)
        return format_actions(self.witness)


def trace_inclusion(
    left: Automaton,
    right: Automaton,
    depth: int,
    mode: str = FULL,
    right_depth: Optional[int] = None,
    exact_right: bool = False,
) -> InclusionResult:
    """
    Checks that every trace of `left` up to `depth` is a trace of `right`.

    By default the right side is enumerated to the same depth. `right_depth`
    enlarges that bound; `exact_right` instead decides membership on the
    whole right automaton.

    Returns:
        InclusionResult; on failure the witness is the least missing trace
    """
    left_traces = enumerate_traces(left, depth, mode)
    if exact_right:
        accepts = trace_acceptor(right, mode)
        for trace in left_traces:
            if not accepts(trace):
                return InclusionResult(False, tuple(trace), mode, len(left_traces))
        return InclusionResult(True, None, mode, len(left_traces))
    right_traces = set(enumerate_traces(right, depth if right_depth is None else right_depth, mode))
    for trace in left_traces:
        if trace not in right_traces:
            return InclusionResult(False, tuple(trace), mode, len(left_traces))
    return InclusionResult(True, None, mode, len(left_traces))


def bounded_refinement(
    left: Automaton,
    right: Automaton,
    depth: int,
    mode: str = FULL,
    budget: Optional[int] = None,
) -> InclusionResult:
    """
    Every trace of `left` up to `depth` is accepted by `right` within `budget` steps.

    A trace the budgeted search rejects only because it was cut off makes
    the result inconclusive rather than failed.
    """
    left_traces = enumerate_traces(left, depth, mode)
    accepts = trace_acceptor(right, mode, max_steps=budget)
    inconclusive = False
    for trace in left_traces:
        membership = accepts(trace)
        if membership:
            continue
        if membership.truncated:
            inconclusive = True
            continue
        return InclusionResult(False, tuple(trace), mode, len(left_traces))
    return InclusionResult(True, None, mode, len(left_traces), inconclusive)
