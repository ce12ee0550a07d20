"""Two-database SPIR over QKD-style keys.

Configs are the same JSON documents the ``qspir`` command line reads; they
may be passed as dicts or JSON strings.
"""

import json

from . import _core
from ._core import (
    ConfigError,
    binary_entropy,
    comm_cost,
    cube_side,
    db_privacy_compliant,
    key_length,
    max_entry_size,
)

__version__ = _core.__version__


def _text(config):
    return config if isinstance(config, str) else json.dumps(config)


def run_experiment(config):
    """Run every trial of ``config``; one dict per trial record."""
    return [json.loads(r) for r in _core.run_experiment(_text(config))]


def check_bounds(config):
    """Run ``config`` and return the bounds report."""
    return json.loads(_core.check_bounds(_text(config)))


def config_digest(config):
    return _core.config_digest(_text(config))


def feasibility_curve(protocol, per_link_budget, inter_dc_budget, n_grid=()):
    """Largest feasible entry size per database size; default grid if empty."""
    return json.loads(_core.feasibility_curve(protocol, per_link_budget, inter_dc_budget, list(n_grid)))


__all__ = [
    "ConfigError",
    "binary_entropy",
    "check_bounds",
    "comm_cost",
    "config_digest",
    "cube_side",
    "db_privacy_compliant",
    "feasibility_curve",
    "key_length",
    "max_entry_size",
    "run_experiment",
]
