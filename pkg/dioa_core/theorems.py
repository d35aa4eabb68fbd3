"""
Theorems Module

Bounded-depth oracles for the compositionality results: execution
projection and pasting, finite-trace pasting, trace substitutivity, its
hiding and renaming forms, congruence of trace equivalence, and
monotonicity under SIOA creation.

Each oracle checks its hypotheses first (at the same depth) and reports
`vacuous` when they fail. Inclusions are checked from the enumerated
left-hand traces against exact membership in the right-hand automaton.
"""

import itertools
import json
import logging
import math
import random
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, FrozenSet, Iterator, List, Optional, Sequence, Tuple

from dioa_core.algebra import Renaming, compose_sioa, hide_sioa, rename_sioa
from dioa_core.behavior import (
    Execution,
    format_trace,
    is_execution,
    is_signature,
    paste_check,
    project_execution,
    trace_of,
    trace_sort_key,
    zip_candidates,
    zip_check,
)
from dioa_core.config_automata import ConfigAutomaton
from dioa_core.creation import check_lemma_assumptions, find_RAB, verify_RAB
from dioa_core.explorer import (
    FULL,
    InclusionResult,
    bounded_refinement,
    enumerate_executions,
    enumerate_traces,
    trace_acceptor,
    trace_inclusion,
)
from dioa_core.random_models import (
    bisimilar_clone,
    pruned_variant,
    random_family,
    random_hide_set,
    random_renaming,
    random_seed_for,
    superset_variant,
)
from dioa_core.settings import get_theorem_config, list_theorems, right_depth_for
from dioa_core.sioa import Action, DioaError, Sioa

logger = logging.getLogger(__name__)

PASS = "pass"
FAIL = "fail"
VACUOUS = "vacuous"
INCONCLUSIVE = "inconclusive"


class TheoremError(DioaError):
    """Base exception for theorem oracle errors."""
    pass


class MalformedBundleError(TheoremError):
    """Raised when a bundle lacks what an oracle needs."""
    pass


@dataclass(frozen=True)
class TheoremBundle:
    """
    The models a theorem oracle runs on.

    `family` is A_1..A_n and `variants` the A'_1..A'_n it is compared with;
    the creation oracle uses the two configuration automata and member ids.
    """
    name: str
    family: Tuple[Sioa, ...] = ()
    variants: Tuple[Sioa, ...] = ()
    hidden: FrozenSet[Action] = frozenset()
    renaming: Optional[Renaming] = None
    x_ca: Optional[ConfigAutomaton] = None
    y_ca: Optional[ConfigAutomaton] = None
    a_id: Optional[str] = None
    b_id: Optional[str] = None
    seed: Optional[int] = None


@dataclass(frozen=True)
class TheoremReport:
    """Verdict of one oracle run."""
    theorem: str
    result: str
    bundle: str
    depth: int
    witness: Optional[str] = None
    detail: str = ""
    checked: int = 0

    @property
    def failed(self) -> bool:
        return self.result == FAIL

    def to_dict(self) -> Dict[str, Any]:
        return {
            "theorem": self.theorem,
            "result": self.result,
            "bundle": self.bundle,
            "depth": self.depth,
            "witness": self.witness,
            "detail": self.detail,
            "checked": self.checked,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, ensure_ascii=False)

    def text(self) -> str:
        lines = [f"{self.theorem}: {self.result} (bundle {self.bundle}, depth {self.depth}, {self.checked} checked)"]
        if self.witness is not None:
            lines.append(f"witness: {self.witness}")
        if self.detail:
            lines.append(self.detail)
        return "\n".join(lines)


@dataclass
class SuiteSummary:
    """Counts of verdicts over a seeded run of random bundles."""
    theorem: str
    depth: int
    counts: Dict[str, int] = field(default_factory=dict)
    failures: List[TheoremReport] = field(default_factory=list)

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def vacuous_ratio(self) -> float:
        return self.counts.get(VACUOUS, 0) / self.total if self.total else 0.0

    def text(self) -> str:
        parts = ", ".join(f"{k} {self.counts.get(k, 0)}" for k in (PASS, FAIL, VACUOUS, INCONCLUSIVE))
        return f"{self.theorem} at depth {self.depth}: {parts}"


Verdict = Tuple[str, Optional[str], str, int]


def _require(bundle: TheoremBundle, theorem_id: str, *names: str) -> None:
    missing = [n for n in names if not getattr(bundle, n)]
    if missing:
        raise MalformedBundleError(f"Bundle '{bundle.name}' lacks {missing} needed by {theorem_id}")


def _require_variants(bundle: TheoremBundle, theorem_id: str) -> None:
    _require(bundle, theorem_id, "family", "variants")
    if len(bundle.family) != len(bundle.variants):
        raise MalformedBundleError(
            f"Bundle '{bundle.name}' has {len(bundle.family)} automata but {len(bundle.variants)} variants"
        )


def _composite(family: Sequence[Sioa], name: str) -> Sioa:
    if len(family) == 1:
        return family[0]
    return compose_sioa(list(family), aut_id=name)


def _executions(aut: Sioa, depth: int, limit: int) -> Iterator[Execution]:
    return itertools.islice(enumerate_executions(aut, depth), limit)


def _inclusion_failure(result: InclusionResult, checked: int, detail: str) -> Verdict:
    return FAIL, result.witness_text(), detail, checked + result.checked


def _projection(bundle: TheoremBundle, depth: int, config: Dict[str, Any]) -> Verdict:
    _require(bundle, "projection", "family")
    composite = _composite(bundle.family, "M")
    if not composite.components:
        composite = compose_sioa([composite], aut_id="M")
    checked = 0
    for alpha in _executions(composite, depth, config["max_executions"]):
        checked += 1
        for j, component in enumerate(composite.components):
            projected = project_execution(composite, alpha, j)
            if not is_execution(component, projected):
                return FAIL, alpha.text(), f"projection onto {component.aut_id} is not an execution", checked
    return PASS, None, "", checked


def _mutate(rng: random.Random, composite: Sioa, alpha: Execution) -> Execution:
    """Replaces one component state or one action of a composite execution."""
    states = list(alpha.states)
    actions = list(alpha.actions)
    if actions and rng.random() < 0.3:
        i = rng.randrange(len(actions))
        actions[i] = rng.choice(sorted(composite.actions()))
    else:
        i = rng.randrange(len(states))
        j = rng.randrange(len(composite.components))
        replacement = rng.choice(sorted(composite.components[j].states))
        states[i] = states[i][:j] + (replacement,) + states[i][j + 1 :]
    return Execution(alpha.owner, tuple(states), tuple(actions))


def _pasting(bundle: TheoremBundle, depth: int, config: Dict[str, Any]) -> Verdict:
    _require(bundle, "pasting", "family")
    composite = compose_sioa(list(bundle.family), aut_id="M")
    rng = random.Random(bundle.seed)
    checked = 0
    for alpha in _executions(composite, depth, config["max_executions"]):
        checked += 1
        report = paste_check(composite, alpha)
        if not report:
            return FAIL, alpha.text(), f"an execution is rejected: {report}", checked
        for _ in range(config["mutations"]):
            mutated = _mutate(rng, composite, alpha)
            report = paste_check(composite, mutated)
            checked += 1
            if not report and report.clause == "replay":
                return FAIL, mutated.text(), "projections paste but the sequence is not an execution", checked
    return PASS, None, "", checked


def _action_count(trace: Sequence) -> int:
    return sum(1 for e in trace if not is_signature(e))


def _bounded_part_tuples(
    rng: random.Random, part_sets: Sequence[Sequence], budget: int, limit: int
) -> Tuple[List[Tuple], int]:
    """
    Tuples of component traces with at most `budget` actions between them.

    Returns all of them when there are at most `limit`, otherwise a seeded
    sample of `limit`, together with how many there are in total.
    """
    by_length: List[Dict[int, List]] = []
    for parts in part_sets:
        groups: Dict[int, List] = {}
        for part in parts:
            groups.setdefault(_action_count(part), []).append(part)
        by_length.append(groups)
    lengths = [
        combo for combo in itertools.product(*[sorted(groups) for groups in by_length]) if sum(combo) <= budget
    ]
    sizes = [math.prod(len(groups[n]) for groups, n in zip(by_length, combo)) for combo in lengths]
    total = sum(sizes)
    chosen = range(total) if total <= limit else sorted(rng.sample(range(total), limit))

    tuples = []
    for index in chosen:
        for combo, size in zip(lengths, sizes):
            if index < size:
                break
            index -= size
        picked = []
        for groups, n in reversed(list(zip(by_length, combo))):
            index, digit = divmod(index, len(groups[n]))
            picked.append(groups[n][digit])
        tuples.append(tuple(reversed(picked)))
    return tuples, total


def _finite_trace_pasting(bundle: TheoremBundle, depth: int, config: Dict[str, Any]) -> Verdict:
    _require(bundle, "finite-trace-pasting", "family")
    composite = compose_sioa(list(bundle.family), aut_id="M")
    checked = 0
    for alpha in _executions(composite, depth, config["max_executions"]):
        checked += 1
        beta = trace_of(composite, alpha, check=False)
        parts = [
            trace_of(component, project_execution(composite, alpha, j), check=False)
            for j, component in enumerate(composite.components)
        ]
        if not zip_check(beta, parts):
            return FAIL, format_trace(beta), "a trace does not zip its projections' traces", checked

    rng = random.Random(bundle.seed)
    part_sets = [enumerate_traces(component, depth) for component in bundle.family]
    tuples, total = _bounded_part_tuples(rng, part_sets, depth, config["max_part_tuples"])
    accepts = trace_acceptor(composite)
    for parts in tuples:
        for beta in sorted(zip_candidates(parts), key=trace_sort_key):
            checked += 1
            if not accepts(beta):
                detail = "zip of " + " ; ".join(format_trace(p) for p in parts) + " is not a trace"
                return FAIL, format_trace(beta), detail, checked
    detail = f"zipped {len(tuples)} of {total} component trace tuples with at most {depth} actions"
    return PASS, None, detail, checked


def _components_included(left: Sequence[Sioa], right: Sequence[Sioa], depth: int) -> Optional[str]:
    for a, b in zip(left, right):
        result = trace_inclusion(a, b, depth, FULL, exact_right=True)
        if not result:
            return f"{a.aut_id}: trace {result.witness_text()} is missing on the right"
    return None


def _substitutivity(bundle: TheoremBundle, depth: int, config: Dict[str, Any]) -> Verdict:
    _require_variants(bundle, "substitutivity")
    problem = _components_included(bundle.family, bundle.variants, depth)
    if problem:
        return VACUOUS, None, problem, 0
    left = _composite(bundle.family, "M")
    right = _composite(bundle.variants, "M'")
    result = trace_inclusion(left, right, depth, FULL, exact_right=True)
    if not result:
        return _inclusion_failure(result, 0, "a composite trace is missing from the substituted composition")
    return PASS, None, "", result.checked


def _closed_pair(bundle: TheoremBundle, theorem_id: str, depth: int) -> Tuple[Optional[str], Sioa, Sioa]:
    _require_variants(bundle, theorem_id)
    left = _composite(bundle.family, "M")
    right = _composite(bundle.variants, "M'")
    hypothesis = trace_inclusion(left, right, depth, FULL, exact_right=True)
    problem = None if hypothesis else f"hypothesis fails: {hypothesis.witness_text()}"
    return problem, left, right


def _hiding_mono(bundle: TheoremBundle, depth: int, config: Dict[str, Any]) -> Verdict:
    problem, left, right = _closed_pair(bundle, "hiding-mono", depth)
    if problem:
        return VACUOUS, None, problem, 0
    hidden = bundle.hidden
    result = trace_inclusion(hide_sioa(left, hidden), hide_sioa(right, hidden), depth, FULL, exact_right=True)
    if not result:
        return _inclusion_failure(result, 0, f"hiding {sorted(hidden)} breaks inclusion")
    return PASS, None, "", result.checked


def _renaming_mono(bundle: TheoremBundle, depth: int, config: Dict[str, Any]) -> Verdict:
    _require(bundle, "renaming-mono", "renaming")
    problem, left, right = _closed_pair(bundle, "renaming-mono", depth)
    uncovered = (left.actions() | right.actions()) - bundle.renaming.domain
    if uncovered:
        raise MalformedBundleError(f"Renaming of bundle '{bundle.name}' misses {sorted(uncovered)}")
    if problem:
        return VACUOUS, None, problem, 0
    result = trace_inclusion(
        rename_sioa(left, bundle.renaming), rename_sioa(right, bundle.renaming), depth, FULL, exact_right=True
    )
    if not result:
        return _inclusion_failure(result, 0, "renaming breaks inclusion")
    return PASS, None, "", result.checked


def _congruence(bundle: TheoremBundle, depth: int, config: Dict[str, Any]) -> Verdict:
    _require_variants(bundle, "congruence")
    problem = _components_included(bundle.family, bundle.variants, depth) or _components_included(
        bundle.variants, bundle.family, depth
    )
    if problem:
        return VACUOUS, None, problem, 0
    left = _composite(bundle.family, "M")
    right = _composite(bundle.variants, "M'")
    checked = 0
    for a, b, label in ((left, right, "M ⊆ M'"), (right, left, "M' ⊆ M")):
        result = trace_inclusion(a, b, depth, FULL, exact_right=True)
        checked += result.checked
        if not result:
            return _inclusion_failure(result, checked, f"{label} fails")
    return PASS, None, "", checked


def _creation_mono(bundle: TheoremBundle, depth: int, config: Dict[str, Any]) -> Verdict:
    _require(bundle, "creation-mono", "x_ca", "y_ca", "a_id", "b_id")
    x_ca, y_ca, a_id, b_id = bundle.x_ca, bundle.y_ca, bundle.a_id, bundle.b_id
    assumptions = check_lemma_assumptions(x_ca, y_ca, a_id, b_id, depth)
    failed = [r for r in assumptions if not r.ok]
    if failed:
        detail = "; ".join(f"assumption {r.number}: {r.detail}" for r in failed)
        return VACUOUS, None, detail, 0

    budget = right_depth_for("creation-mono", depth)
    inclusion = bounded_refinement(x_ca, y_ca, depth, FULL, budget)
    if not inclusion:
        return _inclusion_failure(inclusion, 0, f"trace of {x_ca.aut_id} missing from {y_ca.aut_id}")
    checked = inclusion.checked

    limit = config["max_executions"]
    matched = 0
    capped = False
    for alpha in _executions(x_ca.underlying, depth, limit + 1):
        if matched == limit:
            capped = True
            break
        matched += 1
        checked += 1
        search = find_RAB(x_ca, y_ca, alpha, a_id, b_id)
        if not search:
            return FAIL, alpha.text(), f"no corresponding execution: {search.failure}", checked
        report = verify_RAB(x_ca, y_ca, alpha, search.pi, search.m, a_id, b_id)
        if not report:
            return FAIL, alpha.text(), f"constructed correspondence is invalid: {report}", checked
    detail = f"matched {matched} executions of {x_ca.aut_id} with at most {depth} steps"
    if capped:
        detail += f", stopped at the cap of {limit}"
    if inclusion.inconclusive:
        return INCONCLUSIVE, None, f"right-hand budget {budget} exhausted; {detail}", checked
    return PASS, None, detail, checked


ORACLES: Dict[str, Callable[[TheoremBundle, int, Dict[str, Any]], Verdict]] = {
    "projection": _projection,
    "pasting": _pasting,
    "finite-trace-pasting": _finite_trace_pasting,
    "substitutivity": _substitutivity,
    "hiding-mono": _hiding_mono,
    "renaming-mono": _renaming_mono,
    "congruence": _congruence,
    "creation-mono": _creation_mono,
}


def check_theorem(theorem_id: str, bundle: TheoremBundle, depth: int) -> TheoremReport:
    """
    Runs one theorem oracle on a bundle.

    Args:
        theorem_id: One of the ids of settings.THEOREM_CONFIG
        bundle: Models the theorem is instantiated with
        depth: Exploration depth of the left-hand side

    Returns:
        TheoremReport with result pass, fail, vacuous or inconclusive

    Raises:
        ValueError: If the theorem id is unknown
        MalformedBundleError: If the bundle lacks what the oracle needs
    """
    config = get_theorem_config(theorem_id)
    if depth < 0:
        raise MalformedBundleError(f"Depth must be nonnegative, got {depth}")
    result, witness, detail, checked = ORACLES[theorem_id](bundle, depth, config)
    report = TheoremReport(theorem_id, result, bundle.name, depth, witness, detail, checked)
    logger.info("%s on %s at depth %d: %s", theorem_id, bundle.name, depth, result)
    return report


def random_bundle(theorem_id: str, seed: int) -> TheoremBundle:
    """
    A seeded random bundle for a theorem.

    The substituted component is a bisimilar clone for congruence and a
    superset variant (same signatures, more steps) for the inclusion
    theorems. A share `pruned_variants` of the bundles gets a pruned
    variant (one output or internal step fewer) instead, which usually
    loses traces. Creation monotonicity has no
    random form; the bundled monotone fixture is returned instead.
    """
    config = get_theorem_config(theorem_id)
    if theorem_id == "creation-mono":
        from dioa_core.examples import creation_mono_bundle

        return creation_mono_bundle()
    rng = random.Random(seed)
    family = tuple(random_family(rng))
    k = rng.randrange(len(family))
    variants = list(family)
    if rng.random() < config.get("pruned_variants", 0.0):
        variants[k] = pruned_variant(rng, family[k])
    elif theorem_id == "congruence":
        variants[k] = bisimilar_clone(family[k])
    else:
        variants[k] = superset_variant(rng, family[k])
    composite = _composite(family, "M")
    actions = set(composite.actions())
    for variant in variants:
        actions |= variant.actions()
    return TheoremBundle(
        name=f"random-{seed}",
        family=family,
        variants=tuple(variants),
        hidden=random_hide_set(rng, composite),
        renaming=random_renaming(rng, sorted(actions)),
        seed=seed,
    )


def run_suite(theorem_id: str, instances: int, depth: int, seed: int = 0) -> SuiteSummary:
    """Checks `instances` random bundles derived from `seed`."""
    summary = SuiteSummary(theorem_id, depth)
    for index in range(instances):
        bundle = random_bundle(theorem_id, random_seed_for(seed, index))
        report = check_theorem(theorem_id, bundle, depth)
        summary.counts[report.result] = summary.counts.get(report.result, 0) + 1
        if report.failed:
            summary.failures.append(report)
    logger.info(summary.text())
    return summary


__all__ = [
    "FAIL",
    "INCONCLUSIVE",
    "MalformedBundleError",
    "PASS",
    "TheoremBundle",
    "TheoremError",
    "TheoremReport",
    "VACUOUS",
    "check_theorem",
    "list_theorems",
    "random_bundle",
    "run_suite",
]
