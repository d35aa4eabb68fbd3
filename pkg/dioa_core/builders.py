"""
Builders Module

Turns guarded-command descriptions (state variables, preconditions and
effects that may also change the signature) into explicit automata.
"""

import logging
from collections import deque
from typing import Callable, Dict, Hashable, Iterable, List, Set, Tuple

from dioa_core.sioa import Action, Signature, Sioa, make_sioa

logger = logging.getLogger(__name__)

SignatureFn = Callable[[Hashable], Signature]
EffectFn = Callable[[Hashable, Action], Iterable[Hashable]]
NameFn = Callable[[Hashable], str]


def build_sioa(
    aut_id: str,
    starts: Iterable[Hashable],
    signature: SignatureFn,
    effect: EffectFn,
    name: NameFn = str,
    extra: Iterable[Hashable] = (),
    limit: int = 100000,
) -> Sioa:
    """
    Explores the values reachable from `starts` and builds the automaton.

    Args:
        aut_id: Automaton identifier
        starts: Start values
        signature: Signature of a value (in, out, int may depend on the value)
        effect: Successor values of a value on an action of its signature;
            an empty result means the action is not enabled
        name: Renders a value as its state id (must be injective)
        extra: Values to include even if unreachable
        limit: Maximum number of values explored

    Returns:
        The explicit automaton over the named values

    Raises:
        ValueError: If two values get the same name or the limit is exceeded
    """
    names: Dict[Hashable, str] = {}
    owners: Dict[str, Hashable] = {}

    def name_of(value: Hashable) -> str:
        if value not in names:
            text = name(value)
            if text in owners and owners[text] != value:
                raise ValueError(f"{aut_id}: values {owners[text]!r} and {value!r} share name '{text}'")
            names[value] = text
            owners[text] = value
        return names[value]

    start_values = list(starts)
    queue = deque(start_values + list(extra))
    seen: Set[Hashable] = set(queue)
    sig: Dict[str, Signature] = {}
    steps: List[Tuple[str, Action, str]] = []
    while queue:
        value = queue.popleft()
        source = name_of(value)
        current = signature(value)
        sig[source] = current
        for action in sorted(current.acts):
            for target in effect(value, action):
                steps.append((source, action, name_of(target)))
                if target not in seen:
                    if len(seen) >= limit:
                        raise ValueError(f"{aut_id}: more than {limit} states")
                    seen.add(target)
                    queue.append(target)
    logger.debug("Built %s with %d states and %d steps", aut_id, len(sig), len(steps))
    return make_sioa(aut_id, sig, steps, [name_of(v) for v in start_values])


def flag(value: bool) -> str:
    return "1" if value else "0"
