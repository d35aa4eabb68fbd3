"""
Tests for the Command-Line Interface

Run with: pytest tests/test_cli.py -v
"""

import json

import pytest
import sys
import os

# Add parent directory to path for imports
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from dioa_core.cli import EXIT_ERROR, EXIT_FAIL, EXIT_OK, run_command


class TestUsage:
    """Tests for argument handling and exit codes."""

    def test_help(self, capsys):
        """Verify --help exits cleanly."""
        assert run_command(["--help"]) == EXIT_OK
        assert "validate" in capsys.readouterr().out

    def test_no_command(self):
        """Verify a missing subcommand is a usage error."""
        assert run_command([]) == EXIT_ERROR

    def test_negative_depth(self, model_path, capsys):
        """Verify a negative depth is rejected before running."""
        path = model_path("one-sink")
        assert run_command(["traces", path, "--target", "ONE", "--depth", "-1"]) == EXIT_ERROR
        assert "--depth must be nonnegative" in capsys.readouterr().err

    def test_bad_file(self, tmp_path, capsys):
        """Verify an unreadable model is reported with exit 2."""
        path = tmp_path / "broken.json"
        path.write_text("{not json", encoding="utf-8")
        assert run_command(["validate", str(path)]) == EXIT_ERROR
        assert capsys.readouterr().err.startswith("error: Invalid JSON")


class TestModelCommands:
    """Tests for validate, traces and check-inclusion."""

    def test_validate(self, model_path, capsys):
        """Verify every entry of the creation example reports ok."""
        assert run_command(["validate", model_path("creation-example")]) == EXIT_OK
        lines = capsys.readouterr().out.splitlines()
        assert "A: ok" in lines
        assert "X: ok" in lines

    def test_action_traces(self, model_path, capsys):
        """Verify action traces of X print one per line."""
        path = model_path("creation-example")
        code = run_command(["traces", path, "--target", "X", "--depth", "4", "--actions-only"])
        assert code == EXIT_OK
        lines = capsys.readouterr().out.splitlines()
        assert lines == ["ε", "c", "c a", "c a d", "c d", "c d a"]

    def test_inclusion_fails_with_witness(self, model_path, capsys):
        """Verify the missing trace of X is printed with exit 1."""
        path = model_path("creation-example")
        code = run_command(
            ["check-inclusion", path, "--left", "X", "--right", "Y", "--depth", "4", "--actions-only"]
        )
        assert code == EXIT_FAIL
        out = capsys.readouterr().out
        assert "fails: trace of X missing from Y" in out
        assert "witness: c a d" in out

    def test_inclusion_holds(self, model_path, capsys):
        """Verify ONE includes itself."""
        path = model_path("one-sink")
        code = run_command(["check-inclusion", path, "--left", "ONE", "--right", "ONE", "--depth", "3"])
        assert code == EXIT_OK
        assert capsys.readouterr().out.startswith("holds:")


class TestOperatorCommands:
    """Tests for compose, hide, rename and ca generate."""

    def test_compose(self, model_path, capsys):
        """Verify composing ONE and SINK prints the product state."""
        assert run_command(["compose", model_path("one-sink"), "--autos", "ONE,SINK"]) == EXIT_OK
        data = json.loads(capsys.readouterr().out)
        (automaton,) = data["automata"]
        assert automaton["id"] == "ONE||SINK"
        assert automaton["states"] == ["(u,v)"]

    def test_hide(self, model_path, capsys):
        """Verify hiding a turns it internal."""
        code = run_command(["hide", model_path("one-sink"), "--target", "ONE", "--actions", "a", "--id", "H"])
        assert code == EXIT_OK
        (automaton,) = json.loads(capsys.readouterr().out)["automata"]
        assert automaton["signature"]["u"] == {"in": [], "out": [], "int": ["a"]}

    def test_rename(self, model_path, capsys):
        """Verify renaming maps a to b."""
        code = run_command(["rename", model_path("one-sink"), "--target", "ONE", "--map", "a=b"])
        assert code == EXIT_OK
        (automaton,) = json.loads(capsys.readouterr().out)["automata"]
        assert automaton["transitions"] == [["u", "b", "u"]]

    def test_bad_map(self, model_path, capsys):
        """Verify a malformed renaming entry is a usage error."""
        code = run_command(["rename", model_path("one-sink"), "--target", "ONE", "--map", "ab"])
        assert code == EXIT_ERROR
        assert "a=b" in capsys.readouterr().err

    def test_ca_generate(self, model_path, tmp_path, capsys):
        """Verify a generated CA is written with its annotations."""
        out = tmp_path / "x.json"
        code = run_command(["ca", "generate", model_path("creation-example"), "--name", "X", "--out", str(out)])
        assert code == EXIT_OK
        assert f"written: {out}" in capsys.readouterr().out
        (automaton,) = json.loads(out.read_text(encoding="utf-8"))["automata"]
        assert "annotations" in automaton

    def test_ca_unknown(self, model_path):
        """Verify an unknown configuration automaton name fails."""
        assert run_command(["ca", "generate", model_path("creation-example"), "--name", "Z"]) == EXIT_ERROR


class TestTheoremCommands:
    """Tests for check theorem and examples."""

    def test_projection_on_bundle(self, capsys):
        """Verify the projection oracle passes on a bundled example."""
        code = run_command(["check", "theorem", "--id", "projection", "--bundle", "one-sink", "--depth", "3"])
        assert code == EXIT_OK
        assert capsys.readouterr().out.startswith("projection: pass")

    def test_json_report(self, capsys):
        """Verify --json prints a parseable report."""
        code = run_command(
            ["check", "theorem", "--id", "projection", "--bundle", "one-sink", "--depth", "3", "--json"]
        )
        assert code == EXIT_OK
        assert json.loads(capsys.readouterr().out)["result"] == "pass"

    def test_vacuous_is_not_failure(self, model_path, capsys):
        """Verify a vacuous verdict exits 0."""
        code = run_command(
            [
                "check", "theorem", "--id", "creation-mono", "--bundle", "creation-example",
                "--model", model_path("creation-example"), "--depth", "4",
            ]
        )
        assert code == EXIT_OK
        assert "creation-mono: vacuous" in capsys.readouterr().out

    def test_random_suite(self, capsys):
        """Verify a seeded suite prints its summary."""
        code = run_command(
            ["check", "theorem", "--id", "projection", "--bundle", "random", "--instances", "2", "--depth", "2"]
        )
        assert code == EXIT_OK
        assert capsys.readouterr().out.startswith("projection at depth 2: pass 2")

    def test_random_suite_uses_configured_instances(self, capsys):
        """Verify a random suite without --instances runs the configured count."""
        code = run_command(["check", "theorem", "--id", "creation-mono", "--bundle", "random", "--depth", "3"])
        assert code == EXIT_OK
        assert capsys.readouterr().out.startswith("creation-mono at depth 3: pass 1, fail 0")

    def test_examples_list(self, capsys):
        """Verify the catalogue is listed."""
        assert run_command(["examples", "list"]) == EXIT_OK
        assert "creation-example: " in capsys.readouterr().out

    @pytest.mark.parametrize("argv", [["examples", "emit", "ferry"], ["examples", "emit"]])
    def test_examples_emit_errors(self, argv):
        """Verify emitting needs a known example name."""
        assert run_command(argv) == EXIT_ERROR
