"""Python bindings for the twisted affine character library."""

import json

from ._core import (
    __version__,
    character_value,
    classify_constant_loop,
    cli,
    poisson_sides,
    twining_dimension,
    twisted_character,
)
from . import _core


def fold(tag):
    """Folded root data for an algebra tag such as ``"A4^2"``, as a dict."""
    return json.loads(_core.fold_json(tag))


def run_criterion(criterion, seed=7, threads=1):
    """Runs one acceptance criterion and returns its record as a dict."""
    return json.loads(_core.run_criterion_json(criterion, seed, threads))


def run(*args):
    """Runs a CLI subcommand in-process; returns (exit code, parsed JSON or None, stderr)."""
    code, out, err = cli(list(args))
    try:
        report = json.loads(out)
    except ValueError:
        report = None
    return code, report, err


__all__ = [
    "__version__",
    "character_value",
    "classify_constant_loop",
    "fold",
    "poisson_sides",
    "run",
    "run_criterion",
    "twining_dimension",
    "twisted_character",
]
