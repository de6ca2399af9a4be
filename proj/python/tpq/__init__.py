"""Python access to the tpq checks. Reports come back as dicts with the same
keys as `tpq --json`."""

import json

from ._tpq import (
    COMMANDS,
    EXAMPLES,
    StructureSyntaxError,
    TpqError,
    canonical,
    differentiate,
    normalize_structure,
)
from . import _tpq

__all__ = [
    "COMMANDS",
    "EXAMPLES",
    "StructureSyntaxError",
    "TpqError",
    "canonical",
    "differentiate",
    "normalize_structure",
    "run_command",
    "run_example",
    "check_text",
]


def run_command(command, path, *, seed=1, max_dim=0, trials=20, timing=True):
    """Run a CLI command on a structure file."""
    return json.loads(_tpq.run_command(command, str(path), 2, seed, max_dim, trials, timing))


def run_example(name, *, n=2, seed=1, trials=20, timing=True):
    return json.loads(_tpq.run_command("run-example", name, n, seed, 0, trials, timing))


def check_text(text, command="check-structure", *, seed=1, max_dim=0, trials=20, timing=True):
    """Run a command on structure-file text. Parse errors raise StructureSyntaxError or TpqError."""
    return json.loads(_tpq.run_on_text(command, text, seed, max_dim, trials, timing))
