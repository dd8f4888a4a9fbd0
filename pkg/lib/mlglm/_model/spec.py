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

"""Model description of a multi-layer generalised linear model.

A signal ``X ∈ R^n`` with i.i.d. coordinates drawn from a finite prior
is pushed through ``L`` rounds of Gaussian mixing followed by a
componentwise activation, and the last layer is observed in standard
Gaussian noise at signal-to-noise ratio ``beta``.
"""

import json
import math
from dataclasses import dataclass
from typing import Tuple

from mlglm._imports import numpy as np

from mlglm._utilities.errors import ConfigError
from mlglm._utilities.schema import validate

from .activations import ActivationSpec, _validate_weights


@dataclass(frozen=True)
class PriorSpec:
    """Finite discrete prior supported on [-1, 1].

    Parameters
    ----------
    atoms : tuple of (value, weight)
        Support points with their probabilities.
    """

    atoms: Tuple[Tuple[float, float], ...]

    def __post_init__(self):
        atoms = tuple((float(value), float(weight)) for value, weight in self.atoms)
        object.__setattr__(self, "atoms", atoms)

        _validate_weights([weight for _, weight in atoms], "atoms")

        for i, (value, _) in enumerate(atoms):
            if not -1 <= value <= 1:
                raise ConfigError("atom values must lie within [-1, 1]", f"atoms[{i}][0]")

        if all(value == 0 for value, _ in atoms):
            raise ConfigError(
                "the prior needs an atom with a nonzero value", "atoms"
            )

    @classmethod
    def rademacher(cls):
        return cls(atoms=((-1.0, 0.5), (1.0, 0.5)))

    @classmethod
    def point_mass(cls, value):
        return cls(atoms=((value, 1.0),))

    @property
    def values(self):
        return np.array([value for value, _ in self.atoms])

    @property
    def weights(self):
        return np.array([weight for _, weight in self.atoms])

    @property
    def support_size(self):
        return len(self.atoms)

    @property
    def second_moment(self):
        return float(np.sum(self.weights * self.values**2))

    @classmethod
    def from_dict(cls, data, path="prior"):
        validate(data, "prior", path)

        try:
            return cls(atoms=tuple(tuple(atom) for atom in data["atoms"]))
        except ConfigError as e:
            raise e.with_prefix(path) from None

    def to_dict(self):
        return {"atoms": [[value, weight] for value, weight in self.atoms]}


@dataclass(frozen=True)
class LayerSpec:
    alpha: float
    activation: ActivationSpec

    def __post_init__(self):
        if not (math.isfinite(self.alpha) and self.alpha > 0):
            raise ConfigError("alpha must be a finite positive number", "alpha")

        object.__setattr__(self, "alpha", float(self.alpha))

    @classmethod
    def from_dict(cls, data, path="layer"):
        validate(data, "layer", path)

        activation = ActivationSpec.from_dict(data["activation"], f"{path}.activation")

        try:
            return cls(alpha=data["alpha"], activation=activation)
        except ConfigError as e:
            raise e.with_prefix(path) from None

    def to_dict(self):
        return {"alpha": self.alpha, "activation": self.activation.to_dict()}


@dataclass(frozen=True)
class ModelSpec:
    """An ``L`` layer generalised linear model observed at SNR ``beta``.

    The dimension ratios are ``alphas = (α₀, α₁, ..., α_L)`` with the
    input ratio ``α₀ = 1`` fixed.
    """

    layers: Tuple[LayerSpec, ...]
    prior: PriorSpec
    beta: float

    def __post_init__(self):
        object.__setattr__(self, "layers", tuple(self.layers))

        if len(self.layers) < 1:
            raise ConfigError("at least one layer is required", "layers")

        if not (math.isfinite(self.beta) and self.beta >= 0):
            raise ConfigError("beta must be a finite nonnegative number", "beta")

        object.__setattr__(self, "beta", float(self.beta))

    @property
    def L(self):  # pylint: disable = invalid-name
        return len(self.layers)

    @property
    def alphas(self):
        return (1.0,) + tuple(layer.alpha for layer in self.layers)

    @property
    def activations(self):
        return tuple(layer.activation for layer in self.layers)

    @property
    def is_deterministic(self):
        return all(activation.is_deterministic for activation in self.activations)

    def with_beta(self, beta):
        return ModelSpec(layers=self.layers, prior=self.prior, beta=beta)

    def truncated(self, depth, beta=None):
        """The model made of the first ``depth`` layers."""
        if not 1 <= depth <= self.L:
            raise ConfigError(f"depth must lie within [1, {self.L}]", "layers")

        if beta is None:
            beta = self.beta

        return ModelSpec(layers=self.layers[:depth], prior=self.prior, beta=beta)

    @classmethod
    def from_dict(cls, data, path="model"):
        validate(data, "model", path)

        layers = tuple(
            LayerSpec.from_dict(layer, f"{path}.layers[{i}]")
            for i, layer in enumerate(data["layers"])
        )
        prior = PriorSpec.from_dict(data["prior"], f"{path}.prior")
        beta = data["beta"]

        if "L" in data and data["L"] != len(layers):
            raise ConfigError(
                f"L={data['L']!r} disagrees with the {len(layers)} layers given",
                f"{path}.L",
            )

        try:
            return cls(layers=layers, prior=prior, beta=beta)
        except ConfigError as e:
            raise e.with_prefix(path) from None

    def to_dict(self):
        return {
            "L": self.L,
            "layers": [layer.to_dict() for layer in self.layers],
            "prior": self.prior.to_dict(),
            "beta": self.beta,
        }

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))

    def to_json(self, **kwargs):
        return json.dumps(self.to_dict(), **kwargs)


@dataclass(frozen=True)
class RhoSequence:
    """Limiting second moments ``ρ₀, ..., ρ_L`` of the layer signals."""

    values: Tuple[float, ...]

    def __post_init__(self):
        values = tuple(float(value) for value in self.values)
        object.__setattr__(self, "values", values)

        for i, value in enumerate(values):
            if not value > 0:
                raise ConfigError(f"rho_{i} must be positive, got {value!r}", f"values[{i}]")

    def __getitem__(self, layer):
        return self.values[layer]

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    @property
    def max(self):
        return max(self.values)

    def to_list(self):
        return list(self.values)
