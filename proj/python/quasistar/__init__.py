"""Quasi *-algebra experiments: python access to the C++ core."""

import json

from . import _core

ConfigError = _core.ConfigError


def catalog(module=None):
    """Built-in scenarios as a list of dicts."""
    return json.loads(_core.catalog_json(module))


def run_scenario(module, operation, parameters=None, seed=0):
    """Run one registered operation; returns {passed, result, failures, tables}."""
    return json.loads(_core.run_scenario(module, operation, json.dumps(parameters or {}), seed))


def gns_matrix(n=2, state="trace"):
    """GNS representation of M_n for the normalized trace or the first-entry state."""
    return json.loads(_core.gns_matrix(n, state))


boundedness_classifier = _core.boundedness_classifier
graph_seminorm = _core.graph_seminorm

__all__ = [
    "ConfigError",
    "catalog",
    "run_scenario",
    "gns_matrix",
    "boundedness_classifier",
    "graph_seminorm",
]
