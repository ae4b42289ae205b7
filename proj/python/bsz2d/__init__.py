import json

from ._bsz2d import (
    AccuracyFailure,
    BelowThreshold,
    Error,
    InvalidArgument,
    InvalidWeight,
    Oracle,
    UnreliableOracle,
    Weight,
    __version__,
    gram_schmidt,
    is_stable,
    lex_blocks,
    lex_system,
    total_blocks,
    total_system,
)
from . import _bsz2d


def run_example(kind, depth=4, **params):
    """Regression report for a worked example as a dict."""
    return json.loads(_bsz2d.run_example(kind, params, depth))


def run_invariants(weight, depth=4):
    return json.loads(_bsz2d.run_invariants(weight, depth))
