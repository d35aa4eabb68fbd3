"""
Examples Module

Bundled example models, written as guarded commands and expanded with
builders.build_sioa:

- one-sink: the single-state fixtures ONE (outputs a) and SINK (inputs a)
- mobile-phone: Car, two transmitters and a control station handing the
  car over between transmitters
- creation-example: three automata and two configuration automata X, Y
  whose action-trace sets show that creating A instead of B can add traces
- creation-mono: a variant of the previous pair that meets every
  assumption of the execution correspondence construction
- travel-agent: client agent, request agents (free and heuristic), two
  databases and the specification, at one request and two databases
"""

import logging
from typing import Any, Callable, Dict, Iterable, List, NamedTuple, Optional, Tuple

from dioa_core.algebra import Renaming, rename_sioa
from dioa_core.builders import build_sioa, flag
from dioa_core.model_io import ModelFile, SCHEMA_VERSION, automaton_document, dump_model, parse_model
from dioa_core.sioa import Action, Signature, Sioa, make_sioa
from dioa_core.theorems import TheoremBundle

logger = logging.getLogger(__name__)

def _sig(inputs: Iterable[Action] = (), outputs: Iterable[Action] = (), internals: Iterable[Action] = ()) -> Signature:
    return Signature.of(inputs, outputs, internals)


# Fixtures


def one() -> Sioa:
    return make_sioa("ONE", {"u": _sig(outputs=["a"])}, [("u", "a", "u")], ["u"])


def sink() -> Sioa:
    return make_sioa("SINK", {"v": _sig(inputs=["a"])}, [("v", "a", "v")], ["v"])


# Mobile phone


class _Control(NamedTuple):
    assigned: int
    transferring: bool


class _Trans(NamedTuple):
    active: bool
    transferring: bool
    connected: bool


CONTROL_OUTPUTS = ("gain1", "gain2", "lose1", "lose2")


def control() -> Sioa:
    def effect(s: _Control, action: Action) -> List[_Control]:
        if action == "lose1" and s.assigned == 1 and not s.transferring:
            return [_Control(2, True)]
        if action == "gain2" and s.assigned == 2 and s.transferring:
            return [s._replace(transferring=False)]
        if action == "lose2" and s.assigned == 2 and not s.transferring:
            return [_Control(1, True)]
        if action == "gain1" and s.assigned == 1 and s.transferring:
            return [s._replace(transferring=False)]
        return []

    return build_sioa(
        "Control",
        [_Control(1, False)],
        lambda s: _sig(outputs=CONTROL_OUTPUTS),
        effect,
        name=lambda s: f"asg{s.assigned}_tr{flag(s.transferring)}",
    )


def trans1() -> Sioa:
    """
    Transmitter 1; it starts active and connected to the car.

    The connection follows the car: it ends with its own switch1 and starts
    again when transmitter 2 hands the car back with switch2, so talk1 is
    only ever an input while the car can output it.
    """

    def signature(s: _Trans) -> Signature:
        inputs = ["lose1", "gain1", "switch2"] + (["talk1"] if s.connected else [])
        return _sig(inputs, ["switch1"] if s.connected else [])

    def effect(s: _Trans, action: Action) -> List[_Trans]:
        if action == "lose1":
            return [_Trans(False, True, s.connected)] if s.active else [s]
        if action == "gain1":
            return [s._replace(active=True)]
        if action == "switch2":
            return [s._replace(connected=True)]
        if action == "switch1":
            return [s._replace(transferring=False, connected=False)] if s.transferring else []
        if action == "talk1":
            return [s]
        return []

    return build_sioa(
        "Trans1",
        [_Trans(True, False, True)],
        signature,
        effect,
        name=lambda s: f"act{flag(s.active)}_tr{flag(s.transferring)}_con{flag(s.connected)}",
    )


SWAP_TRANSMITTERS = Renaming.of(
    {
        "lose1": "lose2",
        "lose2": "lose1",
        "gain1": "gain2",
        "gain2": "gain1",
        "talk1": "talk2",
        "talk2": "talk1",
        "switch1": "switch2",
        "switch2": "switch1",
    }
)


def trans2() -> Sioa:
    """Trans1 with channel 1 renamed to 2, starting inactive and disconnected."""
    renamed = rename_sioa(trans1(), SWAP_TRANSMITTERS, aut_id="Trans2")
    return renamed.with_starts(["act0_tr0_con0"])


def car() -> Sioa:
    def signature(transmitter: int) -> Signature:
        return _sig([f"switch{transmitter}"], [f"talk{transmitter}"])

    def effect(transmitter: int, action: Action) -> List[int]:
        if action == f"talk{transmitter}":
            return [transmitter]
        if action == f"switch{transmitter}":
            return [3 - transmitter]
        return []

    return build_sioa("Car", [1], signature, effect, name=lambda t: f"tx{t}")


def mobile_phone() -> List[Sioa]:
    return [car(), trans1(), trans2(), control()]


# Creation example


def _creation_a() -> Sioa:
    # outputs a and b at s0 but only enables a
    return make_sioa(
        "A",
        {"s0": _sig(outputs=["a", "b"]), "s1": _sig()},
        [("s0", "a", "s1")],
        ["s0"],
    )


def _creation_b() -> Sioa:
    return make_sioa(
        "B",
        {"t0": _sig(outputs=["a", "b"]), "t1": _sig()},
        [("t0", "a", "t1"), ("t0", "b", "t1")],
        ["t0"],
    )


def _creation_c() -> Sioa:
    return make_sioa(
        "C",
        {
            "u0": _sig(outputs=["c"]),
            "u1": _sig(outputs=["a", "b"]),
            "u2": _sig(outputs=["d"]),
            "u3": _sig(),
        },
        [
            ("u0", "c", "u1"),
            ("u0", "c", "u2"),
            ("u1", "a", "u3"),
            ("u1", "b", "u3"),
            ("u2", "d", "u3"),
        ],
        ["u0"],
    )


def _mono_b() -> Sioa:
    """Like A, plus an internal stutter before choosing a or b."""
    return make_sioa(
        "B",
        {
            "t0": _sig(outputs=["a", "b"], internals=["tau"]),
            "t0b": _sig(outputs=["a", "b"]),
            "t1": _sig(),
        },
        [
            ("t0", "tau", "t0b"),
            ("t0", "a", "t1"),
            ("t0", "b", "t1"),
            ("t0b", "a", "t1"),
            ("t0b", "b", "t1"),
        ],
        ["t0"],
    )


def _mono_c() -> Sioa:
    return make_sioa(
        "C",
        {"u0": _sig(outputs=["c"]), "u1": _sig(outputs=["d"])},
        [("u0", "c", "u1"), ("u1", "d", "u0")],
        ["u0"],
    )


def _creator_ca(name: str, creates: Optional[str], depth: int) -> Dict[str, Any]:
    policy = []
    if creates:
        policy.append(
            {"config_members": ["C"], "state_constraints": {"C": "u0"}, "action": "c", "create": [creates]}
        )
    return {"name": name, "initial": [{"C": "u0"}], "policy": policy, "depth": depth}


# Travel agent

DATABASES = ("d1", "d2")
FLIGHT_REQUEST = "request_f"
RESPONSES = ("response_fail", "response_ok")
CREATE_REQUEST_AGENT = "create_f"
AGENT_RESPONSES = ("rar_fail", "rar_ok")
MOVES = ("move_c_d1", "move_c_d2", "move_d1_d2", "move_d2_d1")
SPEC_CHOICES = ("adjustsig", "select_d1", "select_d2")


def _db_inputs(d: str) -> Tuple[Action, ...]:
    return (f"conf_{d}_fail", f"conf_{d}_ok", f"inform_{d}_f", f"inform_{d}_none")


def _db_outputs(d: str) -> Tuple[Action, ...]:
    return (f"buy_{d}", f"query_{d}")


# Queries and purchases of every database. Exactly one live automaton
# outputs them at any time (ClientAgt outside the life of the request
# agent, the request agent during it, Spec in the specification), so the
# databases never take them from the environment.
DB_PORTS = tuple(a for d in DATABASES for a in _db_outputs(d))


def _database_of(action: Action) -> str:
    return action.split("_")[1]


TRAVEL_HIDDEN = frozenset(
    (CREATE_REQUEST_AGENT,)
    + AGENT_RESPONSES
    + tuple(a for d in DATABASES for a in _db_inputs(d) + _db_outputs(d))
)


def client_agent() -> Sioa:
    """Phases: idle, requested, created, pending_ok, pending_fail, done."""

    def signature(phase: str) -> Signature:
        inputs = {"idle": [FLIGHT_REQUEST], "created": list(AGENT_RESPONSES)}.get(phase, [])
        ports = () if phase == "created" else DB_PORTS
        return _sig(inputs, RESPONSES + (CREATE_REQUEST_AGENT,) + ports)

    table = {
        ("idle", FLIGHT_REQUEST): "requested",
        ("requested", CREATE_REQUEST_AGENT): "created",
        ("created", "rar_ok"): "pending_ok",
        ("created", "rar_fail"): "pending_fail",
        ("pending_ok", "response_ok"): "done",
        ("pending_fail", "response_fail"): "done",
    }

    def effect(phase: str, action: Action) -> List[str]:
        target = table.get((phase, action))
        return [target] if target else []

    return build_sioa("ClientAgt", ["idle"], signature, effect)


class _ReqAgt(NamedTuple):
    location: str
    first: bool
    status: str
    queried: bool
    ordered: bool
    okflts: bool
    trans: bool
    ticket: bool
    dead: bool = False


_DEAD = _ReqAgt("none", False, "unknown", False, False, False, False, False, True)


def _req_agent_name(s: _ReqAgt) -> str:
    if s.dead:
        return "dead"
    if s.location == "c":
        return "at_c"
    return (
        f"at_{s.location}{'' if s.first else '_last'}_{s.status}"
        f"_q{flag(s.queried)}o{flag(s.ordered)}k{flag(s.okflts)}t{flag(s.trans)}b{flag(s.ticket)}"
    )


def _request_agent(aut_id: str, allowed_moves: Iterable[Action]) -> Sioa:
    """
    Request agent for the single request f.

    Only the flags of the current database are kept: the agent never
    returns to a database it left.
    """
    allowed = frozenset(allowed_moves)

    def signature(s: _ReqAgt) -> Signature:
        if s.dead:
            return _sig()
        if s.location == "c":
            return _sig(outputs=DB_PORTS, internals=MOVES)
        d = s.location
        return _sig(_db_inputs(d), DB_PORTS + AGENT_RESPONSES, MOVES)

    def effect(s: _ReqAgt, action: Action) -> List[_ReqAgt]:
        d = s.location
        if action.startswith("move_"):
            _, src, dst = action.split("_")
            if action not in allowed or src != d:
                return []
            if src == "c":
                return [_ReqAgt(dst, True, "unknown", False, False, False, True, False)]
            if not s.first or s.status != "unknown":
                return []
            return [_ReqAgt(dst, False, s.status, False, False, False, True, s.ticket)]
        if action == f"query_{d}":
            return [s._replace(queried=True)] if not s.queried else []
        if action == f"inform_{d}_f":
            return [s._replace(okflts=True)]
        if action == f"inform_{d}_none":
            return [s if s.okflts else s._replace(trans=False)]
        if action == f"buy_{d}":
            ready = s.okflts and not s.ticket and s.trans and not s.ordered
            return [s._replace(ordered=True)] if ready else []
        if action == f"conf_{d}_ok":
            return [s._replace(trans=False, ticket=True, status="purchased")]
        if action == f"conf_{d}_fail":
            return [s._replace(trans=False, status=s.status if s.first else "failed")]
        if action == "rar_ok":
            return [_DEAD] if s.status == "purchased" and s.ticket else []
        if action == "rar_fail":
            return [_DEAD] if s.status == "failed" else []
        return []

    start = _ReqAgt("c", True, "unknown", False, False, False, False, False)
    return build_sioa(aut_id, [start], signature, effect, name=_req_agent_name)


def request_agent() -> Sioa:
    return _request_agent("ReqAgt_f", MOVES)


def heuristic_request_agent() -> Sioa:
    """Visits the databases in the fixed order d1, d2."""
    return _request_agent("ReqAgtP_f", ("move_c_d1", "move_d1_d2"))


class _Database(NamedTuple):
    received: bool
    ordered: bool
    available: bool


def database(d: str, available: bool) -> Sioa:
    """Every flight conforms to the request, so inform always reports it."""

    def effect(s: _Database, action: Action) -> List[_Database]:
        if action == f"query_{d}":
            return [s._replace(received=True)]
        if action == f"buy_{d}":
            return [s._replace(ordered=True)]
        if action == f"inform_{d}_f":
            return [s] if s.received else []
        if action == f"conf_{d}_ok":
            return [_Database(s.received, False, False)] if s.ordered and s.available else []
        if action == f"conf_{d}_fail":
            return [s._replace(ordered=False)] if s.ordered and not s.available else []
        return []

    return build_sioa(
        f"DB_{d}",
        [_Database(False, False, available)],
        lambda s: _sig(_db_outputs(d), _db_inputs(d)),
        effect,
        name=lambda s: f"r{flag(s.received)}o{flag(s.ordered)}a{flag(s.available)}",
    )


class _Spec(NamedTuple):
    status: str
    selected: Optional[str]
    bounds: Tuple[int, ...]
    trans: Tuple[bool, ...]
    okflts: Tuple[bool, ...]
    resp_ok: bool
    resp_fail: bool


def _set_at(values: Tuple, i: int, value: Any) -> Tuple:
    return values[:i] + (value,) + values[i + 1 :]


def spec(bound: int = 1) -> Sioa:
    """
    Specification of the single request; each database may be queried
    `bound` times. The database choice (select, adjustsig) is internal.
    """

    def signature(s: _Spec) -> Signature:
        inputs: List[Action] = [FLIGHT_REQUEST] if s.status == "notsubmitted" else []
        if s.selected:
            inputs += _db_inputs(s.selected)
        return _sig(inputs, RESPONSES + DB_PORTS, SPEC_CHOICES)

    def effect(s: _Spec, action: Action) -> List[_Spec]:
        if action == FLIGHT_REQUEST:
            return [s._replace(status="submitted")]
        if action.startswith("select_"):
            return [s._replace(selected=action[len("select_"):])]
        if action == "adjustsig":
            return [s._replace(selected=None)]
        if action in RESPONSES:
            ready = s.resp_ok if action == "response_ok" else s.resp_fail
            return [s._replace(status="replied")] if ready and s.status == "computed" else []
        d = _database_of(action)
        if d != s.selected:
            return []
        i = DATABASES.index(d)
        if action == f"query_{d}":
            if s.status != "submitted" or s.bounds[i] == 0:
                return []
            return [s._replace(bounds=_set_at(s.bounds, i, s.bounds[i] - 1), trans=_set_at(s.trans, i, True))]
        if action == f"inform_{d}_f":
            return [s._replace(okflts=_set_at(s.okflts, i, True))]
        if action == f"inform_{d}_none":
            return [s]
        if action == f"buy_{d}":
            return [s] if s.status == "submitted" and s.okflts[i] and s.trans[i] else []
        if action == f"conf_{d}_ok":
            return [s._replace(trans=_set_at(s.trans, i, False), resp_ok=True, status="computed")]
        if action == f"conf_{d}_fail":
            after = s._replace(trans=_set_at(s.trans, i, False))
            if all(b == 0 for b in s.bounds):
                return [after._replace(resp_fail=True, status="computed")]
            return [after]
        return []

    def name(s: _Spec) -> str:
        return (
            f"{s.status}_{s.selected or 'none'}_x{''.join(map(str, s.bounds))}"
            f"_t{''.join(flag(t) for t in s.trans)}_k{''.join(flag(k) for k in s.okflts)}"
            f"_r{flag(s.resp_ok)}{flag(s.resp_fail)}"
        )

    n = len(DATABASES)
    start = _Spec("notsubmitted", None, (bound,) * n, (False,) * n, (False,) * n, False, False)
    return build_sioa("Spec", [start], signature, effect, name=name)


# Model documents


def _document(description: str, automata: Iterable[Sioa], **sections: Any) -> Dict[str, Any]:
    document: Dict[str, Any] = {
        "dioa_schema": SCHEMA_VERSION,
        "description": description,
        "automata": [automaton_document(a) for a in automata],
    }
    document.update({k: v for k, v in sections.items() if v})
    return document


def _one_sink_document() -> Dict[str, Any]:
    return _document(
        "Single-state fixtures: ONE outputs a, SINK inputs a",
        [one(), sink()],
        derived=[{"id": "ONE_SINK", "op": "compose", "of": ["ONE", "SINK"]}],
        bundles=[{"name": "one-sink", "family": ["ONE", "SINK"], "variants": ["ONE", "SINK"]}],
    )


def _mobile_phone_document() -> Dict[str, Any]:
    names = ["Car", "Trans1", "Trans2", "Control"]
    return _document(
        "Mobile phone handover between two transmitters under a control station",
        mobile_phone(),
        renamings={"swap_transmitters": SWAP_TRANSMITTERS.as_dict()},
        hide_sets={"handover": ["gain1", "gain2", "lose1", "lose2", "switch1", "switch2"]},
        derived=[
            {"id": "Phone", "op": "compose", "of": names},
            {"id": "PhoneQuiet", "op": "hide", "of": "Phone", "hide_set": "handover"},
        ],
        bundles=[{"name": "mobile-phone", "family": names, "variants": names, "hide_set": "handover"}],
    )


def _creation_example_document() -> Dict[str, Any]:
    return _document(
        "X creates A on c from C at u0, Y creates nothing; A outputs a and b at s0 "
        "but does not enable b. Action traces: X {c, ca, cd, cad, cda}, Y {c, ca, cb, cd}",
        [_creation_a(), _creation_b(), _creation_c()],
        configuration_automata=[_creator_ca("X", "A", 8), _creator_ca("Y", None, 8)],
        bundles=[{"name": "creation-example", "x": "X", "y": "Y", "a": "A", "b": "B"}],
    )


def _creation_mono_document() -> Dict[str, Any]:
    return _document(
        "X+ creates A and Y+ creates B on every c from C at u0; "
        "B refines A's a-choice with an internal stutter",
        [_creation_a(), _mono_b(), _mono_c()],
        configuration_automata=[_creator_ca("X+", "A", 16), _creator_ca("Y+", "B", 16)],
        bundles=[{"name": "creation-mono", "x": "X+", "y": "Y+", "a": "A", "b": "B"}],
    )


def _travel_ca(name: str, creates: Optional[str], spec_start: str = "") -> Dict[str, Any]:
    initial = {"DB_d1": "r0o0a1", "DB_d2": "r0o0a0"}
    policy = []
    if creates:
        initial["ClientAgt"] = "idle"
        policy.append(
            {
                "config_members": ["ClientAgt", "DB_d1", "DB_d2"],
                "state_constraints": {"ClientAgt": "requested"},
                "action": CREATE_REQUEST_AGENT,
                "create": [creates],
            }
        )
    else:
        initial["Spec"] = spec_start
    return {"name": name, "initial": [initial], "policy": policy, "depth": 64}


def _travel_agent_document() -> Dict[str, Any]:
    specification = spec()
    (spec_start,) = specification.starts
    return _document(
        "Flight purchase with one request and two databases (d1 has the flight, "
        "d2 does not); Spec queries each database at most once",
        [
            client_agent(),
            request_agent(),
            heuristic_request_agent(),
            database("d1", True),
            database("d2", False),
            specification,
        ],
        hide_sets={"internal": sorted(TRAVEL_HIDDEN)},
        configuration_automata=[
            _travel_ca("Impl", "ReqAgt_f"),
            _travel_ca("ImplP", "ReqAgtP_f"),
            _travel_ca("SpecSys", None, spec_start),
        ],
        derived=[
            {"id": "ImplHidden", "op": "hide", "of": "Impl", "hide_set": "internal"},
            {"id": "SpecHidden", "op": "hide", "of": "SpecSys", "hide_set": "internal"},
        ],
        bundles=[{"name": "travel-agent", "x": "ImplP", "y": "Impl", "a": "ReqAgtP_f", "b": "ReqAgt_f"}],
    )


EXAMPLES: Dict[str, Callable[[], Dict[str, Any]]] = {
    "one-sink": _one_sink_document,
    "mobile-phone": _mobile_phone_document,
    "creation-example": _creation_example_document,
    "creation-mono": _creation_mono_document,
    "travel-agent": _travel_agent_document,
}


def list_examples() -> List[Tuple[str, str]]:
    return [(name, build()["description"]) for name, build in EXAMPLES.items()]


def example_model(name: str) -> ModelFile:
    """
    Raises:
        ValueError: If there is no example of that name
    """
    if name not in EXAMPLES:
        raise ValueError(f"Unknown example: '{name}'. Available: {', '.join(EXAMPLES)}")
    return parse_model(EXAMPLES[name]())


def emit_example(name: str) -> str:
    return dump_model(example_model(name))


def find_bundle(name: str) -> TheoremBundle:
    """A bundle of that name from any bundled example."""
    for example in EXAMPLES:
        document = EXAMPLES[example]()
        if any(b["name"] == name for b in document.get("bundles", [])):
            return parse_model(document).bundle(name)
    raise ValueError(f"No bundled example defines bundle '{name}'")


def creation_mono_bundle() -> TheoremBundle:
    return example_model("creation-mono").bundle("creation-mono")
