"""Periodic orbits of a charged particle in Lienard-Wiechert and Kepler-type fields.

Scenarios use the same JSON schema as the ``lorentz_orbits`` command-line tool and
may be passed as a dict, a JSON string, or a path to a JSON file.
"""

from __future__ import annotations

import json
import os
from pathlib import Path
from typing import Any, Union

from . import _core
from ._core import CollisionProximity, ConfigError, Error

Config = Union[dict, str, os.PathLike]

__all__ = [
    "CollisionProximity",
    "ConfigError",
    "Error",
    "check_assumptions",
    "evaluate_fields",
    "find_orbits",
    "kepler_circular_radius",
    "resolve_config",
    "run",
]


def _as_json(config: Config) -> str:
    if isinstance(config, dict):
        return json.dumps(config)
    if isinstance(config, os.PathLike) or (isinstance(config, str) and not config.lstrip().startswith("{")):
        return Path(config).read_text()
    return config


def resolve_config(config: Config, seed: int | None = None, threads: int | None = None) -> dict[str, Any]:
    """Validated config with every default filled in."""
    return json.loads(_core.resolve_config(_as_json(config), seed, threads))


def evaluate_fields(config: Config, t: float, x) -> dict[str, Any]:
    """V, A, E, B of the scenario's model at time t and point x."""
    return _core.evaluate_fields(_as_json(config), float(t), [float(v) for v in x])


def check_assumptions(config: Config, threads: int | None = None) -> dict[str, Any]:
    """Sampled (V), (AV1), (AV2) report, as written to assumptions.json."""
    return json.loads(_core.check_assumptions(_as_json(config), threads))


def find_orbits(config: Config, seed: int | None = None, threads: int | None = None) -> list[dict[str, Any]]:
    """Distinct converged orbits of the scenario's multiplicity scan."""
    return json.loads(_core.find_orbits(_as_json(config), seed, threads))


def run(command: str, config: Config, out: Union[str, os.PathLike], seed: int | None = None,
        threads: int | None = None) -> int:
    """Runs a CLI command in-process and returns its exit code."""
    return _core.run_command(command, _as_json(config), Path(out), seed, threads)


def kepler_circular_radius(alpha: float, k: int, period: float, c: float) -> float:
    """Radius of the circular orbit that closes k times in the given period."""
    return _core.kepler_circular_radius(alpha, k, period, c)
