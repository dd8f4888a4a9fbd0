# Copyright (C) 2024 mlglm Contributors

# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at

#     http://www.apache.org/licenses/LICENSE-2.0

# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.


"""Run configuration documents.

A run configuration is a single JSON object::

    {
        "schema_version": 1,
        "model": {"layers": [...], "prior": {...}, "beta": 1.0},
        "task": "saddle",
        "parameters": {"method": "grid"},
        "seed": 0,
        "output": "results",
        "threads": 1
    }

Every task documents its parameters and their defaults within
``TASK_PARAMETERS``. Documents are validated against
``config.schema.json``, which rejects unknown keys wherever they appear.
"""

import copy
import json
import pathlib
from dataclasses import dataclass, field
from typing import Any, Dict

from mlglm._model import ModelSpec
from mlglm._utilities.errors import ConfigError
from mlglm._utilities.schema import validate

SCHEMA_VERSION = 1
DEFAULT_OUTPUT = "mlglm-output"

_SADDLE_PARAMETERS = {
    "method": "auto",
    "resolution": 16,
    "refine_rounds": 3,
    "damping": 0.5,
    "tol": 1e-7,
    "max_iter": 1000,
    "n_restarts": 8,
    "rules": None,
}

_SIMULATE_PARAMETERS = {
    "n": 12,
    "replications": 200,
}

TASK_PARAMETERS = {
    "rho": {
        "order": 200,
        # {"n": int, "replications": int}
        "empirical": None,
        # {"n_small": int, "n_large": int, "replications": int}
        "variance_decay": None,
    },
    "psi-table": {
        "layer": 1,
        "h1_points": 10,
        "h2_max": 4.0,
        "h2_points": 10,
        "r_max": 5.0,
        "r_points": 21,
        "rules": None,
    },
    "saddle": {**_SADDLE_PARAMETERS, "layer_limits": False},
    "hopf-check": {
        **_SADDLE_PARAMETERS,
        # Registry data {"psi1": {"kind": ...}, "psi2": {...}}, or the
        # initial data of the model itself when null
        "data": None,
        "t_points": 17,
        "s_points": 65,
        "h2_points": 65,
        "t_max": 0.75,
        "h2_max": None,
        "inner_grid": 257,
        "psi1_points": 33,
        "psi2_points": None,
        "tolerances": None,
    },
    "simulate": {**_SIMULATE_PARAMETERS, "monotone_check": False},
    "compare": {**_SADDLE_PARAMETERS, **_SIMULATE_PARAMETERS, "slack": 0.05},
}


def resolve_parameters(task, parameters, path="parameters"):
    """Task parameters validated and merged over their defaults.

    Integers given for float parameters are converted.
    """
    validate(parameters, f"parameters/{task}", path)

    defaults = TASK_PARAMETERS[task]
    resolved = copy.deepcopy(defaults)
    for name, value in (parameters or {}).items():
        if isinstance(defaults[name], float):
            value = float(value)

        resolved[name] = value

    return resolved


@dataclass(frozen=True)
class RunConfig:
    """A validated run configuration."""

    model: ModelSpec
    task: str
    parameters: Dict[str, Any] = field(default_factory=dict)
    seed: int = 0
    output: str = DEFAULT_OUTPUT
    threads: int = 1
    schema_version: int = SCHEMA_VERSION

    @classmethod
    def from_dict(cls, data):
        validate(data)

        task = data["task"]

        return cls(
            model=ModelSpec.from_dict(data["model"], "model"),
            task=task,
            parameters=resolve_parameters(task, data.get("parameters")),
            seed=data.get("seed", 0),
            output=data.get("output", DEFAULT_OUTPUT),
            threads=data.get("threads", 1),
            schema_version=data["schema_version"],
        )

    def to_dict(self):
        return {
            "schema_version": self.schema_version,
            "model": self.model.to_dict(),
            "task": self.task,
            "parameters": copy.deepcopy(self.parameters),
            "seed": self.seed,
            "output": self.output,
            "threads": self.threads,
        }


def parse_override(text):
    """Split ``dotted.key=value``, parsing ``value`` as JSON when possible."""
    key, separator, raw = text.partition("=")
    if not separator or not key:
        raise ConfigError(f"expected dotted.key=value, got {text!r}", "--set")

    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw

    return key.split("."), value


def apply_override(data, keys, value):
    """Set ``value`` at the dotted location ``keys`` of a raw document.

    Integer segments index into lists, ``model.layers.0.alpha`` for
    example.
    """
    target = data
    for depth, key in enumerate(keys[:-1]):
        location = ".".join(keys[: depth + 1])
        if isinstance(target, list):
            try:
                target = target[int(key)]
            except (ValueError, IndexError):
                raise ConfigError("no such list entry", location) from None
        else:
            if not isinstance(target, dict):
                raise ConfigError("cannot descend into a value", location)
            target = target.setdefault(key, {})

    last = keys[-1]
    if isinstance(target, list):
        try:
            target[int(last)] = value
        except (ValueError, IndexError):
            raise ConfigError("no such list entry", ".".join(keys)) from None
    elif isinstance(target, dict):
        target[last] = value
    else:
        raise ConfigError("cannot descend into a value", ".".join(keys))


def load_config(path, overrides=(), seed=None, output=None, threads=None):
    """Read, override and validate a run configuration file.

    Parameters
    ----------
    path : str or pathlib.Path
    overrides : iterable of str
        ``dotted.key=value`` strings applied in order.
    seed, output, threads : optional
        Shortcuts for the respective top level overrides.

    Returns
    -------
    RunConfig
    """
    try:
        with open(pathlib.Path(path)) as f:
            data = json.load(f)
    except FileNotFoundError:
        raise ConfigError(f"no such file {str(path)!r}", "config") from None
    except json.JSONDecodeError as e:
        raise ConfigError(f"invalid JSON ({e})", "config") from None

    for text in overrides:
        keys, value = parse_override(text)
        apply_override(data, keys, value)

    for key, value in (("seed", seed), ("output", output), ("threads", threads)):
        if value is not None:
            data[key] = value

    return RunConfig.from_dict(data)
