"""
Command-line interface.

    python -m dioa_core [--log LEVEL] <command> ...

Exit codes: 0 ok or pass, 1 the checked property fails (witness printed),
2 usage, model or validation error.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from dioa_core.algebra import Renaming, compose_sioa, hide_sioa, rename_sioa
from dioa_core.behavior import format_actions, format_trace
from dioa_core.config_automata import (
    ConfigAutomaton,
    compose_ca,
    generate_ca,
    hide_ca,
    rename_ca,
    validate_ca,
)
from dioa_core.configuration import Configuration
from dioa_core.examples import emit_example, find_bundle, list_examples
from dioa_core.explorer import ACTIONS, FULL, enumerate_traces, trace_inclusion
from dioa_core.model_io import ModelFile, Target, dump_ca, dump_sioa, load_model
from dioa_core.settings import DIOA_DEPTH_DEFAULT, DIOA_LOG_LEVEL, get_theorem_config, list_theorems
from dioa_core.sioa import DioaError
from dioa_core.theorems import FAIL, check_theorem, run_suite

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_ERROR = 2


class UsageError(DioaError):
    """Raised for arguments argparse accepts but the command cannot use."""
    pass


def _split(text: str) -> List[str]:
    return [part.strip() for part in text.split(",") if part.strip()]


def _parse_map(text: str) -> dict:
    table = {}
    for item in _split(text):
        if "=" not in item:
            raise UsageError(f"Renaming entry '{item}' is not of the form a=b")
        src, dst = item.split("=", 1)
        table[src.strip()] = dst.strip()
    return table


def _write(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
        print(f"written: {out}")
    else:
        sys.stdout.write(text)


def _dump(target: Target) -> str:
    if isinstance(target, ConfigAutomaton):
        return dump_ca(target)
    return dump_sioa(target)


def _cmd_validate(args: argparse.Namespace) -> int:
    model = load_model(args.model)
    status = EXIT_OK
    for name in model.automata:
        print(f"{name}: ok")
    for name, entry in model.cas.items():
        report = validate_ca(entry.automaton)
        print(f"{name}: {report.summary()}")
        if not report.ok:
            status = EXIT_ERROR
    for name in model.derived:
        print(f"{name}: ok ({model.derived[name].op})")
    return status


def _cmd_compose(args: argparse.Namespace) -> int:
    model = load_model(args.model)
    operands = [model.target(n) for n in _split(args.autos)]
    if all(isinstance(o, ConfigAutomaton) for o in operands):
        result: Target = compose_ca(operands, name=args.id)
    else:
        plain = [o.underlying if isinstance(o, ConfigAutomaton) else o for o in operands]
        result = compose_sioa(plain, aut_id=args.id)
    _write(_dump(result), args.out)
    return EXIT_OK


def _cmd_hide(args: argparse.Namespace) -> int:
    model = load_model(args.model)
    target = model.target(args.target)
    hidden = _split(args.actions)
    if isinstance(target, ConfigAutomaton):
        result: Target = hide_ca(target, hidden, name=args.id)
    else:
        result = hide_sioa(target, hidden, aut_id=args.id)
    _write(_dump(result), args.out)
    return EXIT_OK


def _cmd_rename(args: argparse.Namespace) -> int:
    model = load_model(args.model)
    target = model.target(args.target)
    plain = target.underlying if isinstance(target, ConfigAutomaton) else target
    renaming = Renaming.of(_parse_map(args.map))
    if isinstance(target, ConfigAutomaton):
        actions = set(plain.actions())
        for member in target.registry.values():
            actions |= member.actions()
        result: Target = rename_ca(target, renaming.extended(actions), name=args.id)
    else:
        result = rename_sioa(target, renaming.extended(plain.actions()), aut_id=args.id)
    _write(_dump(result), args.out)
    return EXIT_OK


def _cmd_traces(args: argparse.Namespace) -> int:
    model = load_model(args.model)
    mode = ACTIONS if args.actions_only else FULL
    traces = enumerate_traces(model.target(args.target), args.depth, mode)
    for trace in traces:
        print(format_actions(trace) if mode == ACTIONS else format_trace(trace))
    logger.info("%d traces", len(traces))
    return EXIT_OK


def _cmd_check_inclusion(args: argparse.Namespace) -> int:
    model = load_model(args.model)
    mode = ACTIONS if args.actions_only else FULL
    result = trace_inclusion(
        model.target(args.left),
        model.target(args.right),
        args.depth,
        mode,
        right_depth=args.right_depth,
        exact_right=args.exact_right,
    )
    if result:
        print(f"holds: {result.checked} traces of {args.left} checked at depth {args.depth}")
        return EXIT_OK
    print(f"fails: trace of {args.left} missing from {args.right}")
    print(f"witness: {result.witness_text()}")
    return EXIT_FAIL


def _cmd_ca_generate(args: argparse.Namespace) -> int:
    model = load_model(args.model)
    if args.name not in model.cas:
        raise UsageError(f"No configuration automaton named '{args.name}'")
    entry = model.cas[args.name]
    ca = entry.automaton
    if args.depth is not None and args.depth != entry.depth:
        registry = dict(ca.registry)
        configs = [Configuration.of(members, registry) for members in entry.initial]
        ca = generate_ca(entry.name, configs, entry.policy, registry, args.depth)
    _write(dump_ca(ca), args.out)
    return EXIT_OK


def _bundle_model(args: argparse.Namespace) -> Optional[ModelFile]:
    return load_model(args.model) if args.model else None


def _cmd_check_theorem(args: argparse.Namespace) -> int:
    depth = args.depth
    if args.bundle == "random":
        instances = args.instances
        if instances is None:
            instances = get_theorem_config(args.id)["instances"]
        summary = run_suite(args.id, instances, depth, args.seed)
        print(summary.text())
        for report in summary.failures:
            print(report.to_json() if args.json else report.text())
        return EXIT_FAIL if summary.failures else EXIT_OK
    model = _bundle_model(args)
    bundle = model.bundle(args.bundle) if model else find_bundle(args.bundle)
    report = check_theorem(args.id, bundle, depth)
    print(report.to_json() if args.json else report.text())
    return EXIT_FAIL if report.result == FAIL else EXIT_OK


def _cmd_examples(args: argparse.Namespace) -> int:
    if args.action == "list":
        for name, description in list_examples():
            print(f"{name}: {description}")
        return EXIT_OK
    if not args.name:
        raise UsageError("examples emit needs an example name")
    _write(emit_example(args.name), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dioa_core", description="Dynamic I/O automata toolkit")
    parser.add_argument(
        "--log",
        default=None,
        choices=["error", "warning", "info", "debug"],
        help=f"log level (default from DIOA_LOG_LEVEL, currently {DIOA_LOG_LEVEL.lower()})",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    validate = commands.add_parser("validate", help="load and validate a model file")
    validate.add_argument("model")
    validate.set_defaults(func=_cmd_validate)

    compose = commands.add_parser("compose", help="compose automata of a model")
    compose.add_argument("model")
    compose.add_argument("--autos", required=True, help="comma-separated automaton names")
    compose.add_argument("--id", default=None)
    compose.add_argument("--out", default=None)
    compose.set_defaults(func=_cmd_compose)

    hide = commands.add_parser("hide", help="hide output actions")
    hide.add_argument("model")
    hide.add_argument("--target", required=True)
    hide.add_argument("--actions", required=True, help="comma-separated actions")
    hide.add_argument("--id", default=None)
    hide.add_argument("--out", default=None)
    hide.set_defaults(func=_cmd_hide)

    rename = commands.add_parser("rename", help="rename actions (unmapped actions keep their name)")
    rename.add_argument("model")
    rename.add_argument("--target", required=True)
    rename.add_argument("--map", required=True, help="a=b,c=d")
    rename.add_argument("--id", default=None)
    rename.add_argument("--out", default=None)
    rename.set_defaults(func=_cmd_rename)

    traces = commands.add_parser("traces", help="enumerate traces up to a depth")
    traces.add_argument("model")
    traces.add_argument("--target", required=True)
    traces.add_argument("--depth", type=int, default=DIOA_DEPTH_DEFAULT, metavar="N")
    traces.add_argument("--actions-only", action="store_true")
    traces.set_defaults(func=_cmd_traces)

    inclusion = commands.add_parser("check-inclusion", help="bounded trace inclusion")
    inclusion.add_argument("model")
    inclusion.add_argument("--left", required=True)
    inclusion.add_argument("--right", required=True)
    inclusion.add_argument("--depth", type=int, default=DIOA_DEPTH_DEFAULT, metavar="N")
    inclusion.add_argument("--actions-only", action="store_true")
    right = inclusion.add_mutually_exclusive_group()
    right.add_argument("--right-depth", type=int, default=None, metavar="N")
    right.add_argument("--exact-right", action="store_true")
    inclusion.set_defaults(func=_cmd_check_inclusion)

    ca = commands.add_parser("ca", help="configuration automata")
    ca_commands = ca.add_subparsers(dest="ca_command", required=True)
    generate = ca_commands.add_parser("generate", help="generate a configuration automaton")
    generate.add_argument("model")
    generate.add_argument("--name", required=True)
    generate.add_argument("--depth", type=int, default=None, metavar="N")
    generate.add_argument("--out", default=None)
    generate.set_defaults(func=_cmd_ca_generate)

    check = commands.add_parser("check", help="theorem oracles")
    check_commands = check.add_subparsers(dest="check_command", required=True)
    theorem = check_commands.add_parser("theorem", help="check one theorem on a bundle")
    theorem.add_argument("--id", required=True, choices=list_theorems())
    theorem.add_argument("--bundle", required=True, help="'random' or a bundle name")
    theorem.add_argument("--model", default=None, help="model file holding the bundle")
    theorem.add_argument("--seed", type=int, default=0)
    theorem.add_argument(
        "--instances", type=int, default=None, help="size of the random suite (default: per theorem)"
    )
    theorem.add_argument("--depth", type=int, default=DIOA_DEPTH_DEFAULT, metavar="N")
    theorem.add_argument("--json", action="store_true")
    theorem.set_defaults(func=_cmd_check_theorem)

    examples = commands.add_parser("examples", help="bundled example models")
    examples.add_argument("action", choices=["list", "emit"])
    examples.add_argument("name", nargs="?")
    examples.add_argument("--out", default=None)
    examples.set_defaults(func=_cmd_examples)
    return parser


def _configure_logging(level: Optional[str]) -> None:
    name = (level or DIOA_LOG_LEVEL).upper()
    logging.basicConfig(
        level=getattr(logging, name, logging.WARNING),
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )


def run_command(argv: Optional[Sequence[str]] = None) -> int:
    """
    Runs one command and returns its exit code.

    Args:
        argv: Arguments without the program name (default: sys.argv[1:])

    Returns:
        0 ok or pass, 1 property fails, 2 usage or validation error
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_ERROR
    _configure_logging(args.log)
    for name in ("depth", "right_depth", "instances"):
        value = getattr(args, name, None)
        if value is not None and value < 0:
            print(f"error: --{name.replace('_', '-')} must be nonnegative", file=sys.stderr)
            return EXIT_ERROR
    try:
        return args.func(args)
    except (DioaError, ValueError) as e:
        logger.debug("Command %s failed", args.command, exc_info=True)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR


def main() -> None:
    sys.exit(run_command())
