"""
Model I/O Module

The versioned JSON model format: automata, configuration automata with
their creation policies, named renamings and hide sets, derived entries
(compose, hide, rename) and theorem bundles.

Loading is total-or-error: every automaton is validated and every
configuration automaton generated before a ModelFile is returned.
"""

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, FrozenSet, List, Mapping, Optional, Tuple, Union

from dioa_core.algebra import Renaming, compose_sioa, hide_sioa, rename_sioa
from dioa_core.config_automata import (
    ConfigAutomaton,
    CreationPolicy,
    PolicyRule,
    as_member,
    ca_states_text,
    compose_ca,
    generate_ca,
    hide_ca,
    rename_ca,
)
from dioa_core.configuration import Configuration
from dioa_core.settings import DIOA_CA_DEPTH
from dioa_core.sioa import (
    Action,
    DioaError,
    Signature,
    Sioa,
    ValidationReport,
    make_sioa,
    sorted_states,
    state_text,
    validate_sioa,
)
from dioa_core.theorems import TheoremBundle

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1
DERIVED_OPS = ("compose", "hide", "rename")

Target = Union[Sioa, ConfigAutomaton]


class ModelFormatError(DioaError):
    """Raised when a model file cannot be parsed or is structurally wrong."""
    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + where)
        self.line = line
        self.column = column


class ModelValidationError(ModelFormatError):
    """Raised when an automaton of the file fails validate_sioa."""
    def __init__(self, aut_id: str, report: ValidationReport):
        super().__init__(f"Automaton '{aut_id}' is not a valid SIOA:\n{report.summary()}")
        self.aut_id = aut_id
        self.report = report


@dataclass(frozen=True)
class CaEntry:
    """A configuration automaton as declared: generation inputs plus the result."""
    name: str
    initial: Tuple[Tuple[Tuple[str, str], ...], ...]
    policy: CreationPolicy
    depth: int
    automaton: ConfigAutomaton = field(compare=False, repr=False, default=None)


@dataclass(frozen=True)
class DerivedEntry:
    aut_id: str
    op: str
    of: Tuple[str, ...]
    hide_set: Optional[str] = None
    renaming: Optional[str] = None


@dataclass(frozen=True)
class BundleEntry:
    """Names of the model entries a theorem bundle is built from."""
    name: str
    family: Tuple[str, ...] = ()
    variants: Tuple[str, ...] = ()
    hide_set: Optional[str] = None
    renaming: Optional[str] = None
    x: Optional[str] = None
    y: Optional[str] = None
    a: Optional[str] = None
    b: Optional[str] = None
    seed: Optional[int] = None


@dataclass
class ModelFile:
    description: str = ""
    automata: Dict[str, Sioa] = field(default_factory=dict)
    cas: Dict[str, CaEntry] = field(default_factory=dict)
    renamings: Dict[str, Renaming] = field(default_factory=dict)
    hide_sets: Dict[str, FrozenSet[Action]] = field(default_factory=dict)
    derived: Dict[str, DerivedEntry] = field(default_factory=dict)
    bundles: Dict[str, BundleEntry] = field(default_factory=dict)
    _resolved: Dict[str, Target] = field(default_factory=dict, compare=False, repr=False)

    def names(self) -> List[str]:
        return list(self.automata) + list(self.cas) + list(self.derived)

    def target(self, name: str) -> Target:
        """
        Resolves an automaton, a configuration automaton or a derived entry.

        Raises:
            ModelFormatError: If no entry has that name
        """
        if name in self.automata:
            return self.automata[name]
        if name in self.cas:
            return self.cas[name].automaton
        if name in self._resolved:
            return self._resolved[name]
        if name not in self.derived:
            raise ModelFormatError(f"No automaton named '{name}'. Known: {', '.join(self.names())}")
        resolved = _resolve_derived(self, self.derived[name])
        self._resolved[name] = resolved
        return resolved

    def bundle(self, name: str) -> TheoremBundle:
        if name not in self.bundles:
            raise ModelFormatError(f"No bundle named '{name}'. Known: {', '.join(self.bundles)}")
        entry = self.bundles[name]
        x_ca = self.target(entry.x) if entry.x else None
        y_ca = self.target(entry.y) if entry.y else None
        for ref, ca in ((entry.x, x_ca), (entry.y, y_ca)):
            if ca is not None and not isinstance(ca, ConfigAutomaton):
                raise ModelFormatError(f"Bundle '{name}': '{ref}' is not a configuration automaton")
        return TheoremBundle(
            name=name,
            family=tuple(self._plain(n) for n in entry.family),
            variants=tuple(self._plain(n) for n in entry.variants),
            hidden=self.hide_sets.get(entry.hide_set, frozenset()) if entry.hide_set else frozenset(),
            renaming=self.renamings.get(entry.renaming) if entry.renaming else None,
            x_ca=x_ca,
            y_ca=y_ca,
            a_id=entry.a,
            b_id=entry.b,
            seed=entry.seed,
        )

    def _plain(self, name: str) -> Sioa:
        target = self.target(name)
        return target.underlying if isinstance(target, ConfigAutomaton) else target


def _resolve_derived(model: ModelFile, entry: DerivedEntry) -> Target:
    operands = [model.target(n) for n in entry.of]
    if entry.op == "compose":
        if all(isinstance(o, ConfigAutomaton) for o in operands):
            return compose_ca(operands, name=entry.aut_id)
        plain = [o.underlying if isinstance(o, ConfigAutomaton) else o for o in operands]
        return compose_sioa(plain, aut_id=entry.aut_id)
    (operand,) = operands
    if entry.op == "hide":
        hidden = model.hide_sets[entry.hide_set]
        if isinstance(operand, ConfigAutomaton):
            return hide_ca(operand, hidden, name=entry.aut_id)
        return hide_sioa(operand, hidden, aut_id=entry.aut_id)
    renaming = model.renamings[entry.renaming]
    if isinstance(operand, ConfigAutomaton):
        return rename_ca(operand, renaming, name=entry.aut_id)
    return rename_sioa(operand, renaming, aut_id=entry.aut_id)


def _fail(message: str) -> None:
    raise ModelFormatError(message)


def _strings(value: Any, where: str) -> List[str]:
    if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
        _fail(f"{where}: expected a list of strings")
    return list(value)


def _object(value: Any, where: str) -> Dict[str, Any]:
    if not isinstance(value, dict):
        _fail(f"{where}: expected an object")
    return value


def _unique(names: List[str], seen: Dict[str, str], kind: str) -> None:
    for name in names:
        if name in seen:
            _fail(f"Duplicate id '{name}' ({kind}; already used by {seen[name]})")
        seen[name] = kind


def _parse_automaton(raw: Any, index: int) -> Sioa:
    raw = _object(raw, f"automata[{index}]")
    where = f"automaton '{raw.get('id', index)}'"
    for key in ("id", "states", "start", "signature", "transitions"):
        if key not in raw:
            _fail(f"{where}: missing '{key}'")
    states = _strings(raw["states"], f"{where}.states")
    if len(set(states)) != len(states):
        _fail(f"{where}: duplicate state ids")
    sig: Dict[str, Signature] = {}
    for state, parts in _object(raw["signature"], f"{where}.signature").items():
        parts = _object(parts, f"{where}.signature.{state}")
        unknown = set(parts) - {"in", "out", "int"}
        if unknown:
            _fail(f"{where}.signature.{state}: unknown keys {sorted(unknown)}")
        sig[state] = Signature.of(
            _strings(parts.get("in", []), f"{where}.signature.{state}.in"),
            _strings(parts.get("out", []), f"{where}.signature.{state}.out"),
            _strings(parts.get("int", []), f"{where}.signature.{state}.int"),
        )
    steps = []
    for step in raw["transitions"]:
        if not (isinstance(step, list) and len(step) == 3 and all(isinstance(p, str) for p in step)):
            _fail(f"{where}: transition {step!r} is not a [src, action, dst] triple")
        steps.append(tuple(step))
    return make_sioa(raw["id"], sig, steps, _strings(raw["start"], f"{where}.start"), states)


def _parse_policy(raw: Any, where: str) -> CreationPolicy:
    rules = []
    for i, rule in enumerate(raw or []):
        rule = _object(rule, f"{where}.policy[{i}]")
        if "action" not in rule:
            _fail(f"{where}.policy[{i}]: missing 'action'")
        rules.append(
            PolicyRule.of(
                _strings(rule.get("config_members", []), f"{where}.policy[{i}].config_members"),
                rule["action"],
                _strings(rule.get("create", []), f"{where}.policy[{i}].create"),
                _object(rule.get("state_constraints", {}), f"{where}.policy[{i}].state_constraints"),
            )
        )
    return CreationPolicy(tuple(rules))


def _parse_ca(raw: Any, index: int, registry: Dict[str, Sioa]) -> CaEntry:
    raw = _object(raw, f"configuration_automata[{index}]")
    if "name" not in raw or "initial" not in raw:
        _fail(f"configuration_automata[{index}]: 'name' and 'initial' are required")
    name = raw["name"]
    depth = raw.get("depth", DIOA_CA_DEPTH)
    if not isinstance(depth, int) or depth < 0:
        _fail(f"configuration automaton '{name}': depth must be a nonnegative integer")
    initial = tuple(
        tuple(sorted(_object(c, f"configuration automaton '{name}'.initial").items()))
        for c in raw["initial"]
    )
    policy = _parse_policy(raw.get("policy"), f"configuration automaton '{name}'")
    configs = [Configuration.of(members, registry) for members in initial]
    automaton = generate_ca(name, configs, policy, registry, depth)
    return CaEntry(name, initial, policy, depth, automaton)


def _parse_derived(raw: Any, index: int, model: ModelFile) -> DerivedEntry:
    raw = _object(raw, f"derived[{index}]")
    for key in ("id", "op", "of"):
        if key not in raw:
            _fail(f"derived[{index}]: missing '{key}'")
    op = raw["op"]
    if op not in DERIVED_OPS:
        _fail(f"derived '{raw['id']}': op must be one of {', '.join(DERIVED_OPS)}")
    of = raw["of"]
    of = tuple(_strings(of, f"derived '{raw['id']}'.of")) if isinstance(of, list) else (of,)
    if op != "compose" and len(of) != 1:
        _fail(f"derived '{raw['id']}': {op} takes exactly one operand")
    hide_set = raw.get("hide_set")
    renaming = raw.get("renaming")
    if op == "hide" and hide_set not in model.hide_sets:
        _fail(f"derived '{raw['id']}': unknown hide set '{hide_set}'")
    if op == "rename" and renaming not in model.renamings:
        _fail(f"derived '{raw['id']}': unknown renaming '{renaming}'")
    return DerivedEntry(raw["id"], op, of, hide_set, renaming)


def _parse_bundle(raw: Any, index: int) -> BundleEntry:
    raw = _object(raw, f"bundles[{index}]")
    if "name" not in raw:
        _fail(f"bundles[{index}]: missing 'name'")
    return BundleEntry(
        name=raw["name"],
        family=tuple(_strings(raw.get("family", []), f"bundle '{raw['name']}'.family")),
        variants=tuple(_strings(raw.get("variants", []), f"bundle '{raw['name']}'.variants")),
        hide_set=raw.get("hide_set"),
        renaming=raw.get("renaming"),
        x=raw.get("x"),
        y=raw.get("y"),
        a=raw.get("a"),
        b=raw.get("b"),
        seed=raw.get("seed"),
    )


def parse_model(document: Mapping[str, Any]) -> ModelFile:
    """
    Builds a ModelFile from a decoded JSON document.

    Raises:
        ModelFormatError: For a wrong schema version, duplicate ids or
            dangling references
        ModelValidationError: If an automaton fails validate_sioa
    """
    document = _object(document, "model")
    if document.get("dioa_schema") != SCHEMA_VERSION:
        _fail(f"Unsupported dioa_schema {document.get('dioa_schema')!r}; expected {SCHEMA_VERSION}")
    model = ModelFile(description=document.get("description", ""))
    seen: Dict[str, str] = {}

    for i, raw in enumerate(document.get("automata", [])):
        automaton = _parse_automaton(raw, i)
        _unique([automaton.aut_id], seen, "automaton")
        report = validate_sioa(automaton)
        if not report.ok:
            raise ModelValidationError(automaton.aut_id, report)
        model.automata[automaton.aut_id] = automaton

    for name, mapping in _object(document.get("renamings", {}), "renamings").items():
        model.renamings[name] = Renaming.of(_object(mapping, f"renaming '{name}'"))
    for name, actions in _object(document.get("hide_sets", {}), "hide_sets").items():
        model.hide_sets[name] = frozenset(_strings(actions, f"hide set '{name}'"))

    registry: Dict[str, Sioa] = dict(model.automata)
    for i, raw in enumerate(document.get("configuration_automata", [])):
        entry = _parse_ca(raw, i, registry)
        _unique([entry.name], seen, "configuration automaton")
        model.cas[entry.name] = entry
        registry[entry.name] = as_member(entry.automaton)

    for i, raw in enumerate(document.get("derived", [])):
        entry = _parse_derived(raw, i, model)
        _unique([entry.aut_id], seen, "derived")
        model.derived[entry.aut_id] = entry
    for name in model.derived:
        for ref in model.derived[name].of:
            if ref not in seen:
                _fail(f"derived '{name}' references unknown entry '{ref}'")

    bundle_names: Dict[str, str] = {}
    for i, raw in enumerate(document.get("bundles", [])):
        entry = _parse_bundle(raw, i)
        _unique([entry.name], bundle_names, "bundle")
        model.bundles[entry.name] = entry
        refs = list(entry.family) + list(entry.variants) + [r for r in (entry.x, entry.y) if r]
        for ref in refs:
            if ref not in seen:
                _fail(f"bundle '{entry.name}' references unknown entry '{ref}'")

    for name in model.derived:
        model.target(name)
    logger.info(
        "Loaded model: %d automata, %d configuration automata, %d derived, %d bundles",
        len(model.automata),
        len(model.cas),
        len(model.derived),
        len(model.bundles),
    )
    return model


def loads_model(text: str) -> ModelFile:
    try:
        document = json.loads(text)
    except json.JSONDecodeError as e:
        raise ModelFormatError(f"Invalid JSON: {e.msg}", e.lineno, e.colno) from e
    return parse_model(document)


def load_model(path: Union[str, Path]) -> ModelFile:
    """
    Loads and validates a model file.

    Args:
        path: Path of a `dioa_schema` 1 JSON file

    Returns:
        The fully validated ModelFile

    Raises:
        ModelFormatError: If the file is missing, is not JSON (with line and
            column) or is structurally wrong
        ModelValidationError: If an automaton fails validation
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ModelFormatError(f"Cannot read model file {path}: {e}") from e
    logger.debug("Loading model from %s", path)
    return loads_model(text)


def automaton_document(automaton: Sioa) -> Dict[str, Any]:
    """JSON object of one automaton; state ids are rendered with state_text."""
    states = sorted_states(automaton.states)
    signature = {}
    for s in states:
        sig = automaton.signature(s)
        signature[state_text(s)] = {
            "in": sorted(sig.inputs),
            "out": sorted(sig.outputs),
            "int": sorted(sig.internals),
        }
    transitions = sorted(
        [state_text(src), action, state_text(dst)] for src, action, dst in automaton.steps
    )
    return {
        "id": automaton.aut_id,
        "states": [state_text(s) for s in states],
        "start": [state_text(s) for s in sorted_states(automaton.starts)],
        "signature": signature,
        "transitions": transitions,
    }


def model_document(model: ModelFile) -> Dict[str, Any]:
    document: Dict[str, Any] = {"dioa_schema": SCHEMA_VERSION}
    if model.description:
        document["description"] = model.description
    document["automata"] = [automaton_document(a) for a in model.automata.values()]
    if model.renamings:
        document["renamings"] = {n: r.as_dict() for n, r in model.renamings.items()}
    if model.hide_sets:
        document["hide_sets"] = {n: sorted(h) for n, h in model.hide_sets.items()}
    if model.cas:
        document["configuration_automata"] = [
            {
                "name": entry.name,
                "initial": [dict(members) for members in entry.initial],
                "policy": [
                    {
                        "config_members": sorted(rule.config_members),
                        "state_constraints": dict(rule.state_constraints),
                        "action": rule.action,
                        "create": sorted(rule.create),
                    }
                    for rule in entry.policy.rules
                ],
                "depth": entry.depth,
            }
            for entry in model.cas.values()
        ]
    if model.derived:
        rows = []
        for entry in model.derived.values():
            row: Dict[str, Any] = {
                "id": entry.aut_id,
                "op": entry.op,
                "of": list(entry.of) if entry.op == "compose" else entry.of[0],
            }
            if entry.hide_set:
                row["hide_set"] = entry.hide_set
            if entry.renaming:
                row["renaming"] = entry.renaming
            rows.append(row)
        document["derived"] = rows
    if model.bundles:
        rows = []
        for entry in model.bundles.values():
            row = {"name": entry.name}
            for key in ("family", "variants"):
                if getattr(entry, key):
                    row[key] = list(getattr(entry, key))
            for key in ("hide_set", "renaming", "x", "y", "a", "b", "seed"):
                if getattr(entry, key) is not None:
                    row[key] = getattr(entry, key)
            rows.append(row)
        document["bundles"] = rows
    return document


def dump_model(model: ModelFile) -> str:
    """Canonical serialization: dumping a loaded dump gives the same bytes."""
    return json.dumps(model_document(model), indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def dump_sioa(automaton: Sioa) -> str:
    """A one-automaton model file."""
    document = {"dioa_schema": SCHEMA_VERSION, "automata": [automaton_document(automaton)]}
    return json.dumps(document, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def dump_ca(ca: ConfigAutomaton) -> str:
    """
    A generated CA as a model file whose states carry their `config:` and
    `created:` annotations.
    """
    document = automaton_document(ca.underlying)
    document["annotations"] = {
        row["state"]: {"config": row["config"], "created": row["created"], "frontier": row["frontier"]}
        for row in ca_states_text(ca)
    }
    wrapper = {"dioa_schema": SCHEMA_VERSION, "automata": [document]}
    return json.dumps(wrapper, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
