"""Quotients of spheres by finite groups: exact Betti numbers and bound checks."""

import json

from . import _sqh
from ._sqh import (
    SqhError,
    abelian_bound,
    builtin_names,
    cyclic_bound,
    engine_version,
    finite_bound,
    jordan_combined_bound,
    pgroup_bound,
    sphere_constant,
)

__all__ = [
    "SqhError",
    "abelian_bound",
    "betti",
    "builtin",
    "builtin_names",
    "builtin_scenario",
    "cyclic_bound",
    "engine_version",
    "finite_bound",
    "jordan_combined_bound",
    "pgroup_bound",
    "run",
    "sphere_constant",
    "sweep",
]


def run(scenario, certified=False):
    """Run a scenario given as a dict or JSON text; returns the report dict."""
    text = scenario if isinstance(scenario, str) else json.dumps(scenario)
    return json.loads(_sqh.run_scenario_json(text, certified))


def builtin(name, *params, certified=False):
    return json.loads(_sqh.builtin_json(name, list(params), True, certified))


def builtin_scenario(name, *params):
    return json.loads(_sqh.builtin_json(name, list(params), False, False))


def sweep(n_max=4, samples=50, seed=7, jobs=1, fields=()):
    return json.loads(_sqh.sweep_json(n_max, samples, seed, jobs, list(fields)))


def betti(facets, fields=("Q",), vertex_count=None):
    """Betti numbers of the complex spanned by ``facets``, keyed by field name."""
    facets = [sorted(int(v) for v in f) for f in facets]
    if vertex_count is None:
        vertex_count = 1 + max((v for f in facets for v in f), default=-1)
    table = json.loads(_sqh.betti_json(vertex_count, facets, list(fields)))
    return {row["field"]: row["betti"] for row in table}
