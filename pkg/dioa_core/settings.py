"""
Settings Module

Maps theorem oracle ids to their settings and reads environment defaults.
"""

import logging
import os
from typing import Any, Dict, List

from dotenv import load_dotenv

load_dotenv()

logger = logging.getLogger(__name__)


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        logger.warning("Ignoring %s=%r: not an integer, using %d", name, raw, default)
        return default
    if value < 0:
        logger.warning("Ignoring %s=%r: negative, using %d", name, raw, default)
        return default
    return value


DIOA_DEPTH_DEFAULT = _env_int("DIOA_DEPTH_DEFAULT", 6)
DIOA_CA_DEPTH = _env_int("DIOA_CA_DEPTH", 12)
DIOA_LOG_LEVEL = os.getenv("DIOA_LOG_LEVEL", "WARNING").upper()


THEOREM_CONFIG: Dict[str, Dict[str, Any]] = {
    "projection": {
        "instances": 200,
        "max_executions": 2000,
    },
    "pasting": {
        "instances": 200,
        "max_executions": 2000,
        "mutations": 2,
    },
    "finite-trace-pasting": {
        "instances": 200,
        "max_executions": 2000,
        "max_part_tuples": 64,
    },
    "substitutivity": {
        "instances": 200,
        "pruned_variants": 0.15,
    },
    "hiding-mono": {
        "instances": 200,
        "pruned_variants": 0.15,
    },
    "renaming-mono": {
        "instances": 200,
        "pruned_variants": 0.15,
    },
    "congruence": {
        "instances": 200,
        "pruned_variants": 0.15,
    },
    "creation-mono": {
        "right_depth_factor": 3,
        "instances": 1,
        "max_executions": 500,
    },
}


def get_theorem_config(theorem_id: str) -> Dict[str, Any]:
    """
    Returns the oracle settings for the given theorem.

    Args:
        theorem_id: One of the ids in THEOREM_CONFIG ("projection", "pasting", ...)

    Returns:
        A copy of the settings dictionary: `instances` (size of a random
        suite), the oracle's exploration caps, `pruned_variants` (share of
        random bundles whose variant drops a step instead of adding some)
        and `right_depth_factor` (step budget of a bounded right-hand side)

    Raises:
        ValueError: If the theorem id is not supported
    """
    if theorem_id not in THEOREM_CONFIG:
        supported = ", ".join(THEOREM_CONFIG.keys())
        raise ValueError(f"Unsupported theorem: '{theorem_id}'. Supported: {supported}")
    return dict(THEOREM_CONFIG[theorem_id])


def list_theorems() -> List[str]:
    """Returns the supported theorem ids in canonical order."""
    return list(THEOREM_CONFIG.keys())


def right_depth_for(theorem_id: str, depth: int) -> int:
    """Step budget of the right-hand side: `depth` times the configured factor (default 1)."""
    return depth * get_theorem_config(theorem_id).get("right_depth_factor", 1)
