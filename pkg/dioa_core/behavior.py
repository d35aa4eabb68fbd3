"""
Behavior Module

Executions, traces and pretraces, stuttering reduction, execution
projection and pasting, and the zips/zip predicates.

A pretrace is a tuple whose elements are `ExtSig` values or action names.
A trace is a reduced pretrace (no two successive equal signatures).
"""

import itertools
import logging
from collections import deque
from dataclasses import dataclass
from typing import (
    FrozenSet,
    Iterable,
    Iterator,
    List,
    Optional,
    Sequence,
    Set,
    Tuple,
    Union,
)

from dioa_core.sioa import (
    Action,
    DioaError,
    ExtSig,
    Sioa,
    StateId,
    state_text,
)

logger = logging.getLogger(__name__)

Element = Union[ExtSig, Action]
Pretrace = Tuple[Element, ...]
Trace = Pretrace


class BehaviorError(DioaError):
    """Base exception for execution and trace errors."""
    pass


class NotAnExecutionError(BehaviorError):
    """Raised when a sequence is not an execution (fragment) of its automaton."""
    def __init__(self, message: str, index: int):
        super().__init__(message)
        self.index = index


class ProjectionError(BehaviorError):
    """Raised for a bad component index or a malformed sequence."""
    pass


def is_signature(element: Element) -> bool:
    return isinstance(element, ExtSig)


@dataclass(frozen=True)
class Execution:
    """
    Alternating sequence s0 a1 s1 ... of an automaton.

    A terminating execution ends in an action: it then has as many actions
    as states.
    """
    owner: str
    states: Tuple[StateId, ...]
    actions: Tuple[Action, ...] = ()

    def __post_init__(self) -> None:
        if not self.states:
            raise BehaviorError("An execution has at least one state")
        if len(self.actions) not in (len(self.states) - 1, len(self.states)):
            raise BehaviorError(
                f"Execution of '{self.owner}' has {len(self.states)} states "
                f"and {len(self.actions)} actions"
            )

    @property
    def terminating(self) -> bool:
        return len(self.actions) == len(self.states)

    def __len__(self) -> int:
        return len(self.actions)

    @property
    def first_state(self) -> StateId:
        return self.states[0]

    @property
    def last_state(self) -> StateId:
        return self.states[-1]

    def steps(self) -> Iterator[Tuple[StateId, Action, StateId]]:
        for i in range(len(self.states) - 1):
            yield self.states[i], self.actions[i], self.states[i + 1]

    def prefix(self, length: int) -> "Execution":
        """α|_length: the first `length` transitions."""
        return Execution(self.owner, self.states[: length + 1], self.actions[:length])

    def segment(self, start: int, end: int) -> "Execution":
        """α[start..end] as an execution fragment."""
        return Execution(self.owner, self.states[start : end + 1], self.actions[start:end])

    def extend(self, action: Action, state: StateId) -> "Execution":
        return Execution(self.owner, self.states + (state,), self.actions + (action,))

    def elements(self) -> Tuple:
        """Interleaved s0 a1 s1 ... form."""
        out: List = []
        for i, state in enumerate(self.states):
            out.append(state)
            if i < len(self.actions):
                out.append(self.actions[i])
        return tuple(out)

    def text(self) -> str:
        return " ".join(
            e if i % 2 else state_text(e) for i, e in enumerate(self.elements())
        )


def check_execution(automaton: Sioa, alpha: Execution, fragment: bool = False) -> None:
    """
    Raises NotAnExecutionError unless `alpha` is an execution of `automaton`.

    Args:
        automaton: Owner automaton
        alpha: Candidate execution
        fragment: Accept any first state instead of requiring a start state
    """
    if alpha.states[0] not in automaton.states:
        raise NotAnExecutionError(f"{state_text(alpha.states[0])} is not a state", 0)
    if not fragment and alpha.states[0] not in automaton.starts:
        raise NotAnExecutionError(
            f"{state_text(alpha.states[0])} is not a start state of '{automaton.aut_id}'", 0
        )
    for i, (src, action, dst) in enumerate(alpha.steps()):
        if dst not in automaton.successors(src, action):
            raise NotAnExecutionError(
                f"({state_text(src)},{action},{state_text(dst)}) is not a step "
                f"of '{automaton.aut_id}'",
                i + 1,
            )
    if alpha.terminating:
        last = alpha.actions[-1]
        targets = automaton.successors(alpha.states[-1], last)
        if not any(automaton.is_destroyed(t) for t in targets):
            raise NotAnExecutionError(
                f"final action '{last}' does not lead to an empty signature",
                len(alpha.actions),
            )


def is_execution(automaton: Sioa, alpha: Execution, fragment: bool = False) -> bool:
    try:
        check_execution(automaton, alpha, fragment=fragment)
    except NotAnExecutionError:
        return False
    return True


def reduce_pretrace(gamma: Sequence[Element]) -> Trace:
    """r(γ): collapses maximal blocks of identical external signatures."""
    out: List[Element] = []
    for element in gamma:
        if out and is_signature(element) and out[-1] == element:
            continue
        out.append(element)
    return tuple(out)


def stutter_equiv(gamma: Sequence[Element], other: Sequence[Element]) -> bool:
    return reduce_pretrace(gamma) == reduce_pretrace(other)


def pretrace_problem(gamma: Sequence[Element], finished: bool = True) -> Optional[str]:
    """Returns why `gamma` is not a pretrace, or None when it is one."""
    if not gamma:
        return "empty sequence"
    if not is_signature(gamma[0]):
        return "first element is not an external signature"
    for i in range(1, len(gamma)):
        element = gamma[i]
        if is_signature(element):
            continue
        previous = gamma[i - 1]
        if not is_signature(previous):
            return f"two successive actions at position {i}"
        if element not in previous.acts:
            return f"action '{element}' at position {i} is not in the preceding signature"
    if finished and not is_signature(gamma[-1]):
        return "finite pretrace does not end in an external signature"
    return None


def is_trace(gamma: Sequence[Element]) -> bool:
    return pretrace_problem(gamma) is None and reduce_pretrace(gamma) == tuple(gamma)


def pretrace_of(automaton: Sioa, alpha: Execution) -> Pretrace:
    """Pretrace of an execution before reduction."""
    out: List[Element] = [automaton.ext(alpha.states[0])]
    for i, action in enumerate(alpha.actions):
        source = alpha.states[i]
        if action in automaton.ext(source).acts:
            out.append(action)
        if i + 1 < len(alpha.states):
            out.append(automaton.ext(alpha.states[i + 1]))
    return tuple(out)


def trace_of(automaton: Sioa, alpha: Execution, check: bool = True) -> Trace:
    """
    Computes the trace of an execution (fragment).

    Internal actions are dropped, states become external signatures and
    maximal blocks of equal signatures collapse to one. A terminating
    execution yields a trace that ends in its final action.

    Raises:
        NotAnExecutionError: If `check` is set and alpha is not an execution fragment
    """
    if check:
        check_execution(automaton, alpha, fragment=True)
    return reduce_pretrace(pretrace_of(automaton, alpha))


def action_projection(beta: Sequence[Element]) -> Tuple[Action, ...]:
    """The subsequence of actions of a (pre)trace."""
    return tuple(e for e in beta if not is_signature(e))


def directed_actions(beta: Sequence[Element]) -> Tuple[Tuple[Action, str], ...]:
    """Actions of a trace tagged "in" or "out" by the preceding signature."""
    out: List[Tuple[Action, str]] = []
    for i, element in enumerate(beta):
        if is_signature(element):
            continue
        previous = beta[i - 1]
        out.append((element, "out" if element in previous.outputs else "in"))
    return tuple(out)


def format_trace(beta: Sequence[Element]) -> str:
    """Canonical text form, e.g. `{switch1|talk1} switch1 {switch2|talk2}`."""
    return " ".join(e.text() if is_signature(e) else e for e in beta)


def format_actions(actions: Sequence[Action]) -> str:
    return " ".join(actions) if actions else "ε"


def _parse_set(text: str) -> FrozenSet[Action]:
    return frozenset(a for a in text.split(",") if a)


def parse_trace(text: str) -> Pretrace:
    """Inverse of format_trace."""
    out: List[Element] = []
    for token in text.split():
        if token.startswith("{") and token.endswith("}") and "|" in token:
            inputs, outputs = token[1:-1].split("|", 1)
            out.append(ExtSig(_parse_set(inputs), _parse_set(outputs)))
        else:
            out.append(token)
    return tuple(out)


def trace_sort_key(beta: Sequence[Element]) -> Tuple:
    return tuple((0, e.text()) if is_signature(e) else (1, e) for e in beta)


def project_execution(composite: Sioa, alpha: Execution, index: int) -> Execution:
    """
    Projects a sequence over composite states onto component `index` (0-based).

    The component's state is selected positionally and every action outside
    the component's signature at the source is removed with its target.

    Raises:
        ProjectionError: For a bad index or a sequence over foreign states
    """
    if not composite.components:
        raise ProjectionError(f"'{composite.aut_id}' is not a composition")
    if not 0 <= index < len(composite.components):
        raise ProjectionError(
            f"Component index {index} out of range 0..{len(composite.components) - 1}"
        )
    component = composite.components[index]
    for state in alpha.states:
        if state not in composite.states:
            raise ProjectionError(f"{state_text(state)} is not a state of '{composite.aut_id}'")
    states: List[StateId] = [alpha.states[0][index]]
    actions: List[Action] = []
    for i, action in enumerate(alpha.actions):
        source = alpha.states[i][index]
        if action not in component.acts(source):
            continue
        actions.append(action)
        if i + 1 < len(alpha.states):
            states.append(alpha.states[i + 1][index])
    return Execution(component.aut_id, tuple(states), tuple(actions))


@dataclass(frozen=True)
class CheckReport:
    """Boolean verdict with the failing clause and position, if any."""
    ok: bool
    clause: str = ""
    index: int = -1
    message: str = ""

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self) -> str:
        if self.ok:
            return "ok"
        return f"clause {self.clause} fails at {self.index}: {self.message}"


def paste_check(composite: Sioa, alpha: Execution) -> CheckReport:
    """
    Checks the hypotheses of execution pasting, then replays the sequence.

    Clause 1: every projection is an execution of its component.
    Clause 2: a component whose signature does not contain the action keeps
    its state. When both hold, the sequence must be an execution of the
    composite; a failed replay is reported as clause "replay".
    """
    for i, state in enumerate(alpha.states):
        if state not in composite.states:
            return CheckReport(False, "structure", i, f"{state_text(state)} is not a state")
    for i, action in enumerate(alpha.actions):
        if action not in composite.acts(alpha.states[i]):
            return CheckReport(
                False, "structure", i + 1, f"'{action}' is not in the composite signature"
            )

    for j, component in enumerate(composite.components):
        projected = project_execution(composite, alpha, j)
        try:
            check_execution(component, projected)
        except NotAnExecutionError as exc:
            return CheckReport(False, "1", j, f"projection onto {component.aut_id}: {exc}")

    for i in range(len(alpha.states) - 1):
        action = alpha.actions[i]
        for j, component in enumerate(composite.components):
            before, after = alpha.states[i][j], alpha.states[i + 1][j]
            if action not in component.acts(before) and before != after:
                return CheckReport(
                    False,
                    "2",
                    i + 1,
                    f"{component.aut_id} changes state on '{action}' outside its signature",
                )

    if not is_execution(composite, alpha):
        return CheckReport(False, "replay", len(alpha), "pasted sequence is not an execution")
    return CheckReport(True)


def _product(sigs: Iterable[ExtSig]) -> ExtSig:
    inputs: FrozenSet[Action] = frozenset()
    outputs: FrozenSet[Action] = frozenset()
    for s in sigs:
        inputs |= s.inputs
        outputs |= s.outputs
    return ExtSig(inputs - outputs, outputs)


def zips_check(gamma: Sequence[Element], parts: Sequence[Sequence[Element]]) -> CheckReport:
    """
    Evaluates the four zips clauses literally on pretraces.

    A reference to position i+1 past the end of a part counts as satisfied.
    """
    if not parts:
        return CheckReport(False, "pre", -1, "at least one part is required")
    length = len(gamma)
    for j, part in enumerate(parts):
        if len(part) != length:
            return CheckReport(False, "1", j, f"part {j} has length {len(part)}, expected {length}")

    for i in range(length):
        element = gamma[i]
        if is_signature(element):
            column = [part[i] for part in parts]
            if not all(is_signature(c) for c in column):
                return CheckReport(False, "3", i, "a part holds an action at a signature position")
            if _product(column) != element:
                return CheckReport(False, "3", i, "signature is not the product of the parts")
            if i > 0 and is_signature(gamma[i - 1]):
                moving = [j for j, part in enumerate(parts) if part[i - 1] != part[i]]
                if len(moving) > 1:
                    return CheckReport(False, "4", i, f"parts {moving} change together")
            continue
        if i == 0:
            return CheckReport(False, "pre", 0, "pretrace starts with an action")
        participants = [j for j, part in enumerate(parts) if part[i] == element]
        if not participants:
            return CheckReport(False, "2a", i, f"no part performs '{element}'")
        for j, part in enumerate(parts):
            if j in participants:
                continue
            here = part[i]
            if not is_signature(here):
                return CheckReport(False, "2b", i, f"part {j} holds another action")
            if element in here.acts:
                return CheckReport(False, "2b", i, f"part {j} has '{element}' in its signature")
            if part[i - 1] != here or (i + 1 < length and part[i + 1] != here):
                return CheckReport(False, "2b", i, f"part {j} does not stutter around '{element}'")
    return CheckReport(True)


def _zip_successors(
    beta: Sequence[Element],
    parts: Sequence[Sequence[Element]],
    cursor: Tuple[int, ...],
) -> Iterator[Tuple[int, ...]]:
    """Next cursor tuples (p, p_1, ..., p_n) of the alignment search."""
    p, rest = cursor[0], cursor[1:]
    n = len(parts)
    if not is_signature(beta[p]):
        # action column: the participants and beta move on to the next signature
        action = beta[p]
        if p + 1 >= len(beta):
            return
        nxt = list(rest)
        for j in range(n):
            if parts[j][rest[j]] == action:
                nxt[j] = rest[j] + 1
                if nxt[j] >= len(parts[j]):
                    return
        yield (p + 1,) + tuple(nxt)
        return

    # signature column
    if p + 1 < len(beta) and not is_signature(beta[p + 1]):
        action = beta[p + 1]
        nxt = list(rest)
        moved = False
        for j in range(n):
            here = parts[j][rest[j]]
            if action in here.acts:
                if rest[j] + 1 >= len(parts[j]) or parts[j][rest[j] + 1] != action:
                    break
                nxt[j] = rest[j] + 1
                moved = True
        else:
            if moved:
                yield (p + 1,) + tuple(nxt)
    beta_moves = [p]
    if p + 1 < len(beta) and is_signature(beta[p + 1]):
        beta_moves.append(p + 1)
    for q in beta_moves:
        for j in range(n):
            k = rest[j] + 1
            if k < len(parts[j]) and is_signature(parts[j][k]):
                nxt = list(rest)
                nxt[j] = k
                yield (q,) + tuple(nxt)
        if q != p:
            yield (q,) + tuple(rest)


def _column_ok(beta: Sequence[Element], parts: Sequence[Sequence[Element]], cursor: Tuple[int, ...]) -> bool:
    p, rest = cursor[0], cursor[1:]
    if not is_signature(beta[p]):
        return True
    column = [parts[j][rest[j]] for j in range(len(parts))]
    if not all(is_signature(c) for c in column):
        return False
    return _product(column) == beta[p]


def zip_check(beta: Sequence[Element], parts: Sequence[Sequence[Element]]) -> bool:
    """
    Decides whether stutterings of `beta` and of every part satisfy zips.

    Searches the aligned cursor tuples (position in beta, position in each
    part). Non-participants and non-moving parts repeat their current
    signature, which is exactly a stuttering insertion.
    """
    if not parts or not beta or any(not part for part in parts):
        return False
    start = (0,) * (len(parts) + 1)
    if not _column_ok(beta, parts, start):
        return False
    goal = (len(beta) - 1,) + tuple(len(part) - 1 for part in parts)
    seen: Set[Tuple[int, ...]] = {start}
    queue = deque([start])
    while queue:
        cursor = queue.popleft()
        if cursor == goal:
            return True
        for nxt in _zip_successors(beta, parts, cursor):
            if nxt in seen or not _column_ok(beta, parts, nxt):
                continue
            seen.add(nxt)
            queue.append(nxt)
    return False


def _stutterings(trace: Sequence[Element], length: int) -> Iterator[Pretrace]:
    """All pretraces of exactly `length` elements that reduce to `trace`."""
    slots = [i for i, e in enumerate(trace) if is_signature(e)]
    extra = length - len(trace)
    if extra < 0:
        return
    for counts in _compositions(extra, len(slots)):
        out: List[Element] = []
        repeat = dict(zip(slots, counts))
        for i, element in enumerate(trace):
            out.extend([element] * (1 + repeat.get(i, 0)))
        yield tuple(out)


def _compositions(total: int, parts: int) -> Iterator[Tuple[int, ...]]:
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(total + 1):
        for tail in _compositions(total - first, parts - 1):
            yield (first,) + tail


def zip_check_bruteforce(beta: Sequence[Element], parts: Sequence[Sequence[Element]]) -> bool:
    """Reference oracle: tries every stuttering up to |β| + Σ|β_j| elements."""
    if not parts or not beta or any(not part for part in parts):
        return False
    bound = len(beta) + sum(len(part) for part in parts)
    low = max([len(beta)] + [len(part) for part in parts])
    for length in range(low, bound + 1):
        for gamma in _stutterings(beta, length):
            for combo in itertools.product(*[list(_stutterings(part, length)) for part in parts]):
                if zips_check(gamma, combo):
                    return True
    return False


def zip_candidates(parts: Sequence[Sequence[Element]]) -> FrozenSet[Trace]:
    """
    All traces β with zip(β, parts).

    Walks the part cursors column by column: an action column is forced by
    the parts whose signature holds the action, and a signature column may
    advance one part through a signature change.
    """
    if not parts or any(not part for part in parts):
        return frozenset()
    n = len(parts)
    goal = tuple(len(part) - 1 for part in parts)
    results: Set[Trace] = set()

    def column_sig(cursor: Tuple[int, ...]) -> Optional[ExtSig]:
        column = [parts[j][cursor[j]] for j in range(n)]
        if not all(is_signature(c) for c in column):
            return None
        return _product(column)

    start = (0,) * n
    first = column_sig(start)
    if first is None:
        return frozenset()

    stack: List[Tuple[Tuple[int, ...], Tuple[Element, ...]]] = [(start, (first,))]
    while stack:
        cursor, gamma = stack.pop()
        if cursor == goal:
            results.add(reduce_pretrace(gamma))
        for j in range(n):
            k = cursor[j] + 1
            if k >= len(parts[j]):
                continue
            nxt_elem = parts[j][k]
            if is_signature(nxt_elem):
                nxt = cursor[:j] + (k,) + cursor[j + 1 :]
                sig = column_sig(nxt)
                if sig is not None:
                    stack.append((nxt, gamma + (sig,)))
                continue
            action = nxt_elem
            nxt_list = list(cursor)
            ok = True
            for i in range(n):
                if action not in parts[i][cursor[i]].acts:
                    continue
                after = cursor[i] + 2
                if after >= len(parts[i]) or parts[i][cursor[i] + 1] != action:
                    ok = False
                    break
                nxt_list[i] = after
            if not ok or min(i for i in range(n) if nxt_list[i] != cursor[i]) != j:
                # each action column is generated once, from its lowest participant
                continue
            nxt = tuple(nxt_list)
            sig = column_sig(nxt)
            if sig is not None:
                stack.append((nxt, gamma + (action, sig)))
    return frozenset(results)
