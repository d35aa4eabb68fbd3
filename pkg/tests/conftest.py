"""
Shared fixtures for the dioa_core test-suite.
"""

import sys
import os

import pytest

# Add parent directory to path for imports
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from dioa_core import examples
from dioa_core.sioa import ExtSig, Signature, make_sioa


@pytest.fixture
def one():
    """ONE: a single state u that outputs a."""
    return examples.one()


@pytest.fixture
def sink():
    """SINK: a single state v that inputs a."""
    return examples.sink()


@pytest.fixture
def silent_one():
    """Same signature as ONE but no steps, so a is never performed."""
    return make_sioa("ONE", {"u": Signature.of(outputs=["a"])}, [], ["u"])


@pytest.fixture
def out_a():
    return ExtSig(outputs=frozenset({"a"}))


@pytest.fixture
def in_a():
    return ExtSig(inputs=frozenset({"a"}))


@pytest.fixture
def phone():
    """Car, Trans1, Trans2 and Control, in that order."""
    return examples.mobile_phone()


@pytest.fixture(scope="session")
def creation_model():
    return examples.example_model("creation-example")


@pytest.fixture(scope="session")
def mono_model():
    return examples.example_model("creation-mono")


@pytest.fixture(scope="session")
def travel_model():
    return examples.example_model("travel-agent")


@pytest.fixture
def model_path(tmp_path):
    """Writes a bundled example to a file and returns its path."""

    def write(name: str) -> str:
        path = tmp_path / f"{name}.json"
        path.write_text(examples.emit_example(name), encoding="utf-8")
        return str(path)

    return write
