"""
Creation Analysis Module

Tools for comparing two configuration automata X, Y that differ in which
automaton they create: X creates A where Y creates B.

Includes create-set substitution, configuration correspondence, terminating
traces, projection of a CA execution onto a member, creation correspondence,
and the execution correspondence relation used by the monotonicity results
(its checker and a search that follows the inductive construction).
"""

import logging
from collections import deque
from dataclasses import dataclass
from typing import (
    Dict,
    FrozenSet,
    Iterable,
    List,
    Optional,
    Sequence,
    Set,
    Tuple,
)

from dioa_core.behavior import (
    CheckReport,
    Execution,
    Trace,
    check_execution,
    format_trace,
    is_execution,
    trace_of,
    trace_sort_key,
)
from dioa_core.config_automata import ConfigAutomaton
from dioa_core.configuration import (
    Configuration,
    UnknownAutomatonError,
    destruction_nondeterminism,
    intrinsic_signature,
)
from dioa_core.explorer import FULL, enumerate_executions, trace_acceptor, trace_inclusion
from dioa_core.sioa import (
    Action,
    DioaError,
    ExtSig,
    Sioa,
    StateId,
    sorted_states,
    state_text,
)

logger = logging.getLogger(__name__)

DELIMITER = "//"


class CreationAnalysisError(DioaError):
    """Base exception for creation analysis errors."""
    pass


class SubstitutionError(CreationAnalysisError):
    """Raised when φ[B/A] is asked for a create set that already holds B."""
    pass


class DestructionNondeterminismError(CreationAnalysisError):
    """Raised when the target state, not the action, decides destruction."""
    def __init__(self, aut_id: str, offending: Sequence[Tuple[StateId, Action]]):
        pairs = ", ".join(f"({state_text(s)},{a})" for s, a in offending)
        super().__init__(f"Automaton '{aut_id}' destroys itself nondeterministically at {pairs}")
        self.aut_id = aut_id
        self.offending = tuple(offending)


class HidingNotAllowedError(CreationAnalysisError):
    """Raised when a CA state's signature differs from its configuration's."""
    def __init__(self, aut_id: str, state: StateId):
        super().__init__(
            f"State {state_text(state)} of '{aut_id}' does not carry its configuration's "
            "intrinsic signature (hiding is not supported here)"
        )
        self.aut_id = aut_id
        self.state = state


class LemmaAssumptionError(CreationAnalysisError):
    """Raised when a correspondence search is asked for without its assumptions."""
    def __init__(self, failed: Sequence[int], results: Sequence["AssumptionResult"] = ()):
        super().__init__(f"Assumptions {list(failed)} do not hold")
        self.failed = tuple(failed)
        self.results = tuple(results)


def subst_create_set(phi: Iterable[str], a_id: str, b_id: str) -> FrozenSet[str]:
    """
    φ[B/A]: replaces A by B in a create set.

    Raises:
        SubstitutionError: If B is already in φ (and differs from A)
    """
    created = frozenset(phi)
    if a_id == b_id:
        return created
    if b_id in created:
        raise SubstitutionError(f"{b_id} is already in {sorted(created)}")
    if a_id in created:
        return (created - {a_id}) | {b_id}
    return created


def config_corresponds(c: Configuration, d: Configuration, a_id: str, b_id: str) -> bool:
    """
    C ⊲_AB D: D has C's members with A replaced by B, the others in the
    same state, and B showing the external signature A shows in C.
    """
    if b_id in c and a_id != b_id:
        return False
    if d.ids != subst_create_set(c.ids, a_id, b_id):
        return False
    for aut_id, state in c.members:
        if aut_id == a_id:
            continue
        if d.state_of(aut_id) != state:
            return False
    if a_id in c:
        ext_a = c.automaton(a_id).ext(c.state_of(a_id))
        ext_b = d.automaton(b_id).ext(d.state_of(b_id))
        return ext_a == ext_b
    return True


def require_no_hiding(ca: ConfigAutomaton) -> None:
    """
    Raises:
        HidingNotAllowedError: If some state's signature is not the
            intrinsic signature of its configuration
    """
    for x in sorted_states(ca.states):
        if ca.signature(x) != intrinsic_signature(ca.config(x)):
            raise HidingNotAllowedError(ca.aut_id, x)


def _extend_trace(trace: Trace, external: bool, action: Action, ext: ExtSig) -> Trace:
    if external:
        return trace + (action, ext)
    if trace[-1] == ext:
        return trace
    return trace + (ext,)


def terminating_executions(aut: Sioa, depth: int) -> List[Execution]:
    """Executions with at most `depth` actions whose last action empties the signature."""
    found: List[Execution] = []
    for alpha in enumerate_executions(aut, max(depth - 1, 0)):
        if depth == 0:
            break
        for action, target in aut.moves(alpha.last_state):
            if aut.is_destroyed(target):
                found.append(Execution(aut.aut_id, alpha.states, alpha.actions + (action,)))
    return found


def terminating_traces(aut: Sioa, depth: int) -> List[Trace]:
    """
    Terminating traces of executions with at most `depth` actions.

    Explored over (trace, state) pairs, so distinct executions with the
    same trace are visited once.

    Raises:
        DestructionNondeterminismError: If destruction depends on the target state
    """
    offending = destruction_nondeterminism(aut)
    if offending:
        raise DestructionNondeterminismError(aut.aut_id, offending)
    layer = {((aut.ext(s),), s) for s in aut.starts}
    seen: Set = set(layer)
    results: Set[Trace] = set()
    for _ in range(depth):
        nxt = set()
        for trace, state in layer:
            ext_acts = aut.ext(state).acts
            for action, target in aut.moves(state):
                external = action in ext_acts
                if aut.is_destroyed(target):
                    results.add(trace + (action,) if external else trace)
                    continue
                pair = (_extend_trace(trace, external, action, aut.ext(target)), target)
                if pair not in seen:
                    seen.add(pair)
                    nxt.add(pair)
        layer = nxt
        if not layer:
            break
    logger.debug("terminating_traces %s depth %d: %d traces", aut.aut_id, depth, len(results))
    return sorted(results, key=trace_sort_key)


@dataclass(frozen=True)
class DelimitedExecutionSeq:
    """
    α ⇂⇂ A: the lives of one member along a CA execution.

    Every segment but the last is a terminating execution of the member.
    """
    member: str
    segments: Tuple[Execution, ...] = ()

    def __len__(self) -> int:
        return len(self.segments)

    def text(self) -> str:
        if not self.segments:
            return "ε"
        return f" {DELIMITER} ".join(segment.text() for segment in self.segments)


def project_member(ca: ConfigAutomaton, alpha: Execution, member: str) -> DelimitedExecutionSeq:
    """
    Projects an execution (fragment) of a CA onto one member automaton.

    Steps where the member is absent or does not take part are dropped, a
    delimiter follows every action that empties the member's signature,
    and CA states are replaced by the member's local state.

    Raises:
        UnknownAutomatonError: If the member is not registered with the CA
    """
    if member not in ca.registry:
        raise UnknownAutomatonError(member)
    configs = [ca.config(x) for x in alpha.states]
    segments: List[Execution] = []
    states: List[StateId] = []
    actions: List[Action] = []
    for i, action in enumerate(alpha.actions):
        before = configs[i]
        if member not in before:
            continue
        local = before.state_of(member)
        if action not in before.automaton(member).acts(local):
            continue
        states.append(local)
        actions.append(action)
        if i + 1 >= len(configs) or member not in configs[i + 1]:
            segments.append(Execution(member, tuple(states), tuple(actions)))
            states, actions = [], []
    if member in configs[-1] and not alpha.terminating:
        states.append(configs[-1].state_of(member))
        segments.append(Execution(member, tuple(states), tuple(actions)))
    return DelimitedExecutionSeq(member, tuple(segments))


def _execution_prefix(shorter: Execution, longer: Execution) -> bool:
    head = shorter.elements()
    return longer.elements()[: len(head)] == head


def seq_prefix(xi: DelimitedExecutionSeq, chi: DelimitedExecutionSeq) -> bool:
    """ξ ⊑ χ: equal leading segments and a prefix as the last one."""
    if xi.member != chi.member:
        return False
    k = len(xi.segments)
    if k == 0:
        return True
    if k > len(chi.segments):
        return False
    if xi.segments[: k - 1] != chi.segments[: k - 1]:
        return False
    return _execution_prefix(xi.segments[-1], chi.segments[k - 1])


def seq_trace(xi: DelimitedExecutionSeq, automaton: Sioa) -> Tuple[Trace, ...]:
    return tuple(trace_of(automaton, segment) for segment in xi.segments)


def format_seq_trace(traces: Sequence[Trace]) -> str:
    if not traces:
        return "ε"
    return f" {DELIMITER} ".join(format_trace(t) for t in traces)


@dataclass(frozen=True)
class CorrespondenceReport:
    """Verdict of the creation-correspondence check with its counterexample."""
    ok: bool
    clause: int = 0
    trace: Trace = ()
    x: Optional[StateId] = None
    y: Optional[StateId] = None
    action: Optional[Action] = None
    expected: FrozenSet[str] = frozenset()
    actual: FrozenSet[str] = frozenset()
    message: str = ""

    def __bool__(self) -> bool:
        return self.ok

    def text(self) -> str:
        if self.ok:
            return "creation-corresponding"
        lines = [f"clause {self.clause} fails: {self.message}"]
        if self.trace:
            lines.append(f"  trace:    {format_trace(self.trace)}")
        if self.x is not None:
            lines.append(f"  x:        {state_text(self.x)}")
        if self.y is not None:
            lines.append(f"  y:        {state_text(self.y)}")
        if self.action is not None:
            lines.append(
                f"  created(Y)(y)({self.action}) = {sorted(self.actual)}, "
                f"created(X)(x)({self.action})[B/A] = {sorted(self.expected)}"
            )
        return "\n".join(lines)


def _never_creates(ca: ConfigAutomaton, forbidden: str) -> Optional[Tuple[StateId, Action, FrozenSet[str]]]:
    for (x, action), created in sorted(ca.created_map.items(), key=lambda kv: (state_text(kv[0][0]), kv[0][1])):
        if forbidden in created:
            return x, action, created
    return None


def _pair_moves(x_aut: Sioa, y_aut: Sioa, x: StateId, y: StateId):
    """Joint moves that keep the traces of both sides equal."""
    x_sig = x_aut.signature(x)
    y_sig = y_aut.signature(y)
    ext = x_aut.ext(x)
    for action, x2 in x_aut.moves(x):
        if action in x_sig.internals and x_aut.ext(x2) == ext:
            yield x2, y, None
    for action, y2 in y_aut.moves(y):
        if action in y_sig.internals and y_aut.ext(y2) == ext:
            yield x, y2, None
    for action, x2 in x_aut.moves(x):
        new_ext = x_aut.ext(x2)
        if action in x_sig.internals:
            if new_ext == ext:
                continue
            for b, y2 in y_aut.moves(y):
                if b in y_sig.internals and y_aut.ext(y2) == new_ext:
                    yield x2, y2, (new_ext,)
        else:
            for y2 in y_aut.successors(y, action):
                if y_aut.ext(y2) == new_ext:
                    yield x2, y2, (action, new_ext)


def check_creation_corresponding(
    x_ca: ConfigAutomaton,
    y_ca: ConfigAutomaton,
    a_id: str,
    b_id: str,
    depth: int,
) -> CorrespondenceReport:
    """
    Checks that X, Y are creation-corresponding w.r.t. A, B.

    Clause 1: X never creates B and Y never creates A. Clause 2: after any
    two executions with the same trace, created(Y)(y)(a) = created(X)(x)(a)[B/A]
    for every action a in both signatures. Pairs of last states are explored
    breadth-first for at most `depth` joint moves.

    Returns:
        CorrespondenceReport with the first counterexample in BFS order
    """
    if a_id != b_id:
        hit = _never_creates(x_ca, b_id)
        if hit is not None:
            x, action, created = hit
            return CorrespondenceReport(
                False, 1, x=x, action=action, actual=created,
                message=f"{x_ca.aut_id} creates {b_id} on '{action}'",
            )
        hit = _never_creates(y_ca, a_id)
        if hit is not None:
            y, action, created = hit
            return CorrespondenceReport(
                False, 1, y=y, action=action, actual=created,
                message=f"{y_ca.aut_id} creates {a_id} on '{action}'",
            )

    x_aut, y_aut = x_ca.underlying, y_ca.underlying
    traces: Dict[Tuple[StateId, StateId], Trace] = {}
    queue = deque()
    for x in sorted_states(x_aut.starts):
        for y in sorted_states(y_aut.starts):
            if x_aut.ext(x) == y_aut.ext(y) and (x, y) not in traces:
                traces[(x, y)] = (x_aut.ext(x),)
                queue.append(((x, y), 0))

    while queue:
        (x, y), level = queue.popleft()
        trace = traces[(x, y)]
        shared = x_aut.signature(x).acts & y_aut.signature(y).acts
        for action in sorted(shared):
            expected = subst_create_set(x_ca.created(x, action), a_id, b_id)
            actual = y_ca.created(y, action)
            if actual != expected:
                logger.info("Creation correspondence fails at %s / %s on %s", state_text(x), state_text(y), action)
                return CorrespondenceReport(
                    False, 2, trace, x, y, action, expected, actual,
                    message=f"create sets differ on '{action}' after {format_trace(trace)}",
                )
        if level >= depth or x in x_ca.frontier or y in y_ca.frontier:
            continue
        for x2, y2, suffix in _pair_moves(x_aut, y_aut, x, y):
            if (x2, y2) in traces:
                continue
            traces[(x2, y2)] = trace + suffix if suffix else trace
            queue.append(((x2, y2), level + 1))
    logger.info("Creation correspondence holds on %d state pairs", len(traces))
    return CorrespondenceReport(True)


def check_trace_equivalence_roles(
    x_ca: ConfigAutomaton,
    y_ca: ConfigAutomaton,
    a_id: str,
    b_id: str,
    depth: int,
) -> Tuple[CorrespondenceReport, CorrespondenceReport]:
    """Creation correspondence in both directions: (X,Y,A,B) and (Y,X,B,A)."""
    return (
        check_creation_corresponding(x_ca, y_ca, a_id, b_id, depth),
        check_creation_corresponding(y_ca, x_ca, b_id, a_id, depth),
    )


def _member_traces(ca: ConfigAutomaton, fragment: Execution, member: str) -> Tuple[Trace, ...]:
    projected = project_member(ca, fragment, member)
    if not projected.segments:
        return ()
    return seq_trace(projected, ca.registry[member])


def _step_report(
    x_ca: ConfigAutomaton,
    y_ca: ConfigAutomaton,
    alpha_part: Execution,
    pi_part: Execution,
    a_id: str,
    b_id: str,
    index: int,
) -> Optional[Tuple[int, str]]:
    """First of clauses 3 and 4 violated by one matched step, if any."""
    if trace_of(y_ca.underlying, pi_part, check=False) != trace_of(x_ca.underlying, alpha_part, check=False):
        return 3, f"traces of step {index} differ"
    if _member_traces(y_ca, pi_part, b_id) != _member_traces(x_ca, alpha_part, a_id):
        return 4, f"member traces of step {index} differ"
    return None


def verify_RAB(
    x_ca: ConfigAutomaton,
    y_ca: ConfigAutomaton,
    alpha: Execution,
    pi: Execution,
    m: Sequence[int],
    a_id: str,
    b_id: str,
) -> CheckReport:
    """
    Checks α R_AB π under the index map m, clause by clause.

    Returns:
        CheckReport naming the first failing clause ("structure" for a
        malformed map or foreign executions)
    """
    if not is_execution(x_ca.underlying, alpha) or not is_execution(y_ca.underlying, pi):
        return CheckReport(False, "structure", 0, "not executions of the two automata")
    if len(m) != len(alpha) + 1:
        return CheckReport(False, "structure", len(m), f"map has {len(m)} entries, expected {len(alpha) + 1}")
    for i, value in enumerate(m):
        if not 0 <= value <= len(pi):
            return CheckReport(False, "structure", i, f"m({i}) = {value} is out of range")
        if i and value < m[i - 1]:
            return CheckReport(False, "structure", i, "map is not nondecreasing")
    if m[0] != 0:
        return CheckReport(False, "1", 0, f"m(0) = {m[0]}")
    if m[-1] != len(pi):
        return CheckReport(False, "2", len(alpha), f"m({len(alpha)}) = {m[-1]} does not reach |π| = {len(pi)}")
    for i in range(1, len(alpha) + 1):
        problem = _step_report(
            x_ca, y_ca, alpha.segment(i - 1, i), pi.segment(m[i - 1], m[i]), a_id, b_id, i
        )
        if problem is not None:
            return CheckReport(False, str(problem[0]), i, problem[1])
    for i in range(len(alpha) + 1):
        c = x_ca.config(alpha.states[i])
        d = y_ca.config(pi.states[m[i]])
        if not config_corresponds(c, d, a_id, b_id):
            return CheckReport(False, "5", i, f"{c} does not correspond to {d}")
    return CheckReport(True)


@dataclass(frozen=True)
class RabSearch:
    """Outcome of a search for π and m with α R_AB π."""
    found: bool
    pi: Optional[Execution] = None
    m: Tuple[int, ...] = ()
    cases: Tuple[int, ...] = ()
    failure: str = ""

    def __bool__(self) -> bool:
        return self.found


def proof_case(x_ca: ConfigAutomaton, alpha: Execution, index: int, a_id: str) -> int:
    """Which of the eight cases of the inductive step the transition at `index` falls into."""
    before = x_ca.config(alpha.states[index])
    after = x_ca.config(alpha.states[index + 1])
    action = alpha.actions[index]
    if a_id not in before:
        return 1 if a_id not in after else 2
    signature = before.signature_of(a_id)
    if a_id in after:
        if action not in signature.acts:
            return 3
        return 4 if action in signature.external.acts else 5
    if action not in signature.acts:
        return 6
    return 7 if action in signature.external.acts else 8


def _member_ext(ca: ConfigAutomaton, state: StateId, member: str) -> Optional[ExtSig]:
    config = ca.config(state)
    if member not in config:
        return None
    return config.signature_of(member).external


def _internal_paths(
    y_ca: ConfigAutomaton,
    start: StateId,
    b_id: str,
    target: Trace,
) -> List[Tuple[Tuple[StateId, ...], Tuple[Action, ...]]]:
    """
    Fragments of Y from `start` made only of internal steps of B along
    which B's external signatures read `target`.
    """
    aut = y_ca.underlying
    if _member_ext(y_ca, start, b_id) != target[0]:
        return []
    parents: Dict[Tuple[StateId, int], Optional[Tuple[Tuple[StateId, int], Action]]] = {(start, 0): None}
    queue = deque([(start, 0)])
    order: List[Tuple[StateId, int]] = []
    while queue:
        node = queue.popleft()
        order.append(node)
        y, pos = node
        internals = y_ca.config(y).signature_of(b_id).internals
        for action, y2 in aut.moves(y):
            if action not in internals:
                continue
            ext = _member_ext(y_ca, y2, b_id)
            if ext is None:
                continue
            if ext == target[pos]:
                nxt = (y2, pos)
            elif pos + 1 < len(target) and ext == target[pos + 1]:
                nxt = (y2, pos + 1)
            else:
                continue
            if nxt not in parents:
                parents[nxt] = (node, action)
                queue.append(nxt)

    paths = []
    for node in order:
        if node[1] != len(target) - 1:
            continue
        states: List[StateId] = []
        actions: List[Action] = []
        cursor: Optional[Tuple[StateId, int]] = node
        while cursor is not None:
            states.append(cursor[0])
            link = parents[cursor]
            if link is None:
                break
            cursor, action = link
            actions.append(action)
        states.reverse()
        actions.reverse()
        paths.append((tuple(states), tuple(actions)))
    return paths


def _candidates(
    x_ca: ConfigAutomaton,
    y_ca: ConfigAutomaton,
    alpha: Execution,
    index: int,
    y: StateId,
    case: int,
    a_id: str,
    b_id: str,
) -> List[Tuple[Tuple[StateId, ...], Tuple[Action, ...]]]:
    """Y fragments from y that may match the transition at `index`, per proof case."""
    aut = y_ca.underlying
    action = alpha.actions[index]
    if case in (1, 2, 3):
        return [((y, y2), (action,)) for y2 in aut.successors(y, action)]
    before = _member_ext(x_ca, alpha.states[index], a_id)
    if case in (4, 7):
        out = []
        for states, actions in _internal_paths(y_ca, y, b_id, (before,)):
            for y2 in aut.successors(states[-1], action):
                out.append((states + (y2,), actions + (action,)))
        return out
    if case == 5:
        after = _member_ext(x_ca, alpha.states[index + 1], a_id)
        target = (before,) if after == before else (before, after)
        return _internal_paths(y_ca, y, b_id, target)
    return []


def find_RAB(
    x_ca: ConfigAutomaton,
    y_ca: ConfigAutomaton,
    alpha: Execution,
    a_id: str,
    b_id: str,
    depth: Optional[int] = None,
) -> RabSearch:
    """
    Builds π and m with α R_AB π by following the inductive construction.

    Each transition of α is classified into one of the eight proof cases.
    Cases 1-3 match it with a single step of Y on the same action, cases 4
    and 7 with internal steps of B followed by that action, case 5 with
    internal steps of B only; cases 6 and 8 cannot occur under the
    assumptions. Choices are backtracked so a dead end in one branch does
    not hide a match in another.

    Args:
        x_ca, y_ca: The configuration automata
        alpha: Finite execution of X
        a_id, b_id: The member automata
        depth: When given, the assumptions are checked first at this depth

    Raises:
        LemmaAssumptionError: If `depth` is given and an assumption fails
    """
    if depth is not None:
        results = check_lemma_assumptions(x_ca, y_ca, a_id, b_id, depth)
        failed = [r.number for r in results if not r.ok]
        if failed:
            raise LemmaAssumptionError(failed, results)
    check_execution(x_ca.underlying, alpha)
    if alpha.terminating:
        raise CreationAnalysisError("A configuration automaton execution cannot be terminating")

    start_config = x_ca.config(alpha.first_state)
    dead: Set[Tuple[int, StateId]] = set()
    failures: List[str] = []

    def extend(i: int, y: StateId):
        if i == len(alpha):
            return [], []
        if (i, y) in dead:
            return None
        case = proof_case(x_ca, alpha, i, a_id)
        options = _candidates(x_ca, y_ca, alpha, i, y, case, a_id, b_id)
        if not options:
            failures.append(f"case {case} at step {i + 1}: no matching transition of {y_ca.aut_id}")
        for states, actions in options:
            part = Execution(y_ca.aut_id, states, actions)
            if _step_report(x_ca, y_ca, alpha.segment(i, i + 1), part, a_id, b_id, i + 1) is not None:
                continue
            if not config_corresponds(x_ca.config(alpha.states[i + 1]), y_ca.config(states[-1]), a_id, b_id):
                continue
            rest = extend(i + 1, states[-1])
            if rest is not None:
                return [(states, actions)] + rest[0], [case] + rest[1]
        if options:
            failures.append(f"case {case} at step {i + 1}: no transition keeps the correspondence")
        dead.add((i, y))
        return None

    for y0 in sorted_states(y_ca.underlying.starts):
        if not config_corresponds(start_config, y_ca.config(y0), a_id, b_id):
            continue
        built = extend(0, y0)
        if built is None:
            continue
        parts, cases = built
        states: List[StateId] = [y0]
        actions: List[Action] = []
        m = [0]
        for part_states, part_actions in parts:
            states.extend(part_states[1:])
            actions.extend(part_actions)
            m.append(len(actions))
        pi = Execution(y_ca.aut_id, tuple(states), tuple(actions))
        return RabSearch(True, pi, tuple(m), tuple(cases))
    if not failures:
        failures.append("no start state of Y corresponds to the first configuration")
    return RabSearch(False, failure=failures[0])


def find_RAB_bruteforce(
    x_ca: ConfigAutomaton,
    y_ca: ConfigAutomaton,
    alpha: Execution,
    a_id: str,
    b_id: str,
    max_length: Optional[int] = None,
) -> RabSearch:
    """
    Searches every execution of Y with α's trace (up to `max_length`
    transitions, default 2|α| + 2) for an index map satisfying R_AB.
    """
    check_execution(x_ca.underlying, alpha)
    bound = 2 * len(alpha) + 2 if max_length is None else max_length
    target = trace_of(x_ca.underlying, alpha)
    for pi in enumerate_executions(y_ca, bound):
        if trace_of(y_ca.underlying, pi, check=False) != target:
            continue
        m = _search_map(x_ca, y_ca, alpha, pi, a_id, b_id)
        if m is not None:
            return RabSearch(True, pi, m)
    return RabSearch(False, failure=f"no execution of {y_ca.aut_id} up to {bound} steps corresponds")


def _search_map(
    x_ca: ConfigAutomaton,
    y_ca: ConfigAutomaton,
    alpha: Execution,
    pi: Execution,
    a_id: str,
    b_id: str,
) -> Optional[Tuple[int, ...]]:
    if not config_corresponds(x_ca.config(alpha.first_state), y_ca.config(pi.first_state), a_id, b_id):
        return None
    dead: Set[Tuple[int, int]] = set()

    def extend(i: int, j: int) -> Optional[List[int]]:
        if i == len(alpha):
            return [] if j == len(pi) else None
        if (i, j) in dead:
            return None
        for k in range(j, len(pi) + 1):
            if not config_corresponds(x_ca.config(alpha.states[i + 1]), y_ca.config(pi.states[k]), a_id, b_id):
                continue
            if _step_report(x_ca, y_ca, alpha.segment(i, i + 1), pi.segment(j, k), a_id, b_id, i + 1):
                continue
            rest = extend(i + 1, k)
            if rest is not None:
                return [k] + rest
        dead.add((i, j))
        return None

    tail = extend(0, 0)
    return None if tail is None else tuple([0] + tail)


@dataclass(frozen=True)
class AssumptionResult:
    """One numbered assumption of the execution correspondence construction."""
    number: int
    ok: bool
    detail: str = ""


def _internal_destruction(aut: Sioa) -> Optional[Tuple[StateId, Action]]:
    for state in sorted_states(aut.states):
        internals = aut.signature(state).internals
        for action, target in aut.moves(state):
            if action in internals and aut.is_destroyed(target):
                return state, action
    return None


def _internal_creation(ca: ConfigAutomaton, member: str) -> Optional[Tuple[StateId, Action]]:
    for x in sorted_states(ca.states):
        config = ca.config(x)
        if member not in config:
            continue
        for action in sorted(config.signature_of(member).internals):
            if ca.created(x, action):
                return x, action
    return None


def check_lemma_assumptions(
    x_ca: ConfigAutomaton,
    y_ca: ConfigAutomaton,
    a_id: str,
    b_id: str,
    depth: int,
) -> List[AssumptionResult]:
    """
    Checks assumptions 1-6 of the execution correspondence construction.

    1. B has a single start state; A and B never destroy themselves with an
       internal action.
    2. Internal actions of A and B create nothing.
    3. Every start state of X corresponds to some start state of Y.
    4. Finite traces of A (to `depth`) are traces of B.
    5. Terminating traces of A (to `depth`) are terminating traces of B.
    6. X, Y are creation-corresponding w.r.t. A, B.

    Raises:
        HidingNotAllowedError: If X or Y uses hiding
        UnknownAutomatonError: If A or B is not registered
    """
    require_no_hiding(x_ca)
    require_no_hiding(y_ca)
    for ca, member in ((x_ca, a_id), (y_ca, b_id)):
        if member not in ca.registry:
            raise UnknownAutomatonError(member)
    a_aut = x_ca.registry[a_id]
    b_aut = y_ca.registry[b_id]
    results: List[AssumptionResult] = []

    problems = []
    if len(b_aut.starts) != 1:
        problems.append(f"{b_id} has {len(b_aut.starts)} start states")
    for aut in (a_aut, b_aut):
        hit = _internal_destruction(aut)
        if hit is not None:
            problems.append(f"{aut.aut_id} destroys itself by internal '{hit[1]}' at {state_text(hit[0])}")
    results.append(AssumptionResult(1, not problems, "; ".join(problems)))

    problems = []
    for ca, member in ((x_ca, a_id), (y_ca, b_id)):
        hit = _internal_creation(ca, member)
        if hit is not None:
            problems.append(f"internal '{hit[1]}' of {member} creates automata at {state_text(hit[0])}")
    results.append(AssumptionResult(2, not problems, "; ".join(problems)))

    unmatched = [
        x for x in sorted_states(x_ca.underlying.starts)
        if not any(
            config_corresponds(x_ca.config(x), y_ca.config(y), a_id, b_id)
            for y in y_ca.underlying.starts
        )
    ]
    detail = f"no corresponding start state for {state_text(unmatched[0])}" if unmatched else ""
    results.append(AssumptionResult(3, not unmatched, detail))

    inclusion = trace_inclusion(a_aut, b_aut, depth, FULL, exact_right=True)
    results.append(
        AssumptionResult(4, inclusion.holds, f"missing trace {inclusion.witness_text()}" if not inclusion else "")
    )

    try:
        accepts = trace_acceptor(b_aut, FULL, terminating=True)
        missing = [beta for beta in terminating_traces(a_aut, depth) if not accepts(beta)]
        detail = f"missing terminating trace {format_trace(missing[0])}" if missing else ""
        results.append(AssumptionResult(5, not missing, detail))
    except DestructionNondeterminismError as exc:
        results.append(AssumptionResult(5, False, str(exc)))

    correspondence = check_creation_corresponding(x_ca, y_ca, a_id, b_id, depth)
    results.append(AssumptionResult(6, correspondence.ok, "" if correspondence else correspondence.message))

    for result in results:
        logger.info("Assumption %d: %s %s", result.number, "holds" if result.ok else "fails", result.detail)
    return results
