"""Swarm-based clustering with subtractive seeding.

Thin wrapper over the C++ extension. Points are 2-D float arrays (rows are
observations); cluster assignments and labels are integer arrays.
"""

import json

from ._swarmclust import (
    ContractError,
    DegenerateInputError,
    Error,
    UnsupportedEvaluationError,
    __version__,
    algorithms,
    density_initial,
    error_rate,
    make_blobs,
    run,
    select_centers,
    sicd,
)
from ._swarmclust import run_bench as _run_bench


def run_bench(config, jobs=1):
    """Run a benchmark grid. `config` is a dict or a JSON string; returns the report dict."""
    text = config if isinstance(config, str) else json.dumps(config)
    return json.loads(_run_bench(text, jobs))


__all__ = [
    "ContractError",
    "DegenerateInputError",
    "Error",
    "UnsupportedEvaluationError",
    "__version__",
    "algorithms",
    "density_initial",
    "error_rate",
    "make_blobs",
    "run",
    "run_bench",
    "select_centers",
    "sicd",
]
