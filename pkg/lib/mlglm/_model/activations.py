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

"""The closed registry of layer activations.

Each family is a bounded smooth odd function ``g`` applied as

    φ(z, a) = gain · g(κ z + shift),    a = (gain, shift)

where the optional side information ``a`` is drawn from a finite
discrete distribution. A single entry vector is read as a gain only.
"""

from dataclasses import dataclass
from typing import Optional, Tuple

from mlglm._imports import numpy as np
from mlglm._imports import scipy

from mlglm._utilities.errors import ConfigError
from mlglm._utilities.schema import validate

WEIGHT_SUM_TOLERANCE = 1e-12
DEFAULT_SIDE_ATOM = (1.0, 0.0)


def _tanh(u):
    return np.tanh(u)


def _sine(u):
    return np.sin(u)


def _erf(u):
    return scipy.special.erf(u)


ACTIVATION_REGISTRY = {
    "scaled-tanh": _tanh,
    "scaled-sine": _sine,
    "scaled-erf": _erf,
}


def _as_side_atom(vector):
    """``(gain, shift)`` from a bare gain or a one or two entry list."""
    values = list(vector) if isinstance(vector, list) else [vector]
    gain, shift = (values + [0.0])[:2]

    return (float(gain), float(shift))


@dataclass(frozen=True)
class SideInformation:
    """Finite discrete law of the side information ``a = (gain, shift)``."""

    atoms: Tuple[Tuple[float, float], ...]
    weights: Tuple[float, ...]

    def __post_init__(self):
        _validate_weights(self.weights, "atoms")

        for i, atom in enumerate(self.atoms):
            gain, shift = atom
            if not (np.isfinite(gain) and np.isfinite(shift)):
                raise ConfigError("side information must be finite", f"atoms[{i}]")

        if len(self.atoms) != len(self.weights):
            raise ConfigError("one weight per atom is required", "atoms")

        if all(atom[0] == 0 for atom in self.atoms):
            raise ConfigError(
                "at least one side information atom needs a nonzero gain",
                "atoms",
            )

    @classmethod
    def from_dict(cls, data, path="side_info"):
        validate(data, "side_info", path)

        atoms = tuple(_as_side_atom(vector) for vector, _ in data["atoms"])
        weights = tuple(float(weight) for _, weight in data["atoms"])

        try:
            return cls(atoms=atoms, weights=weights)
        except ConfigError as e:
            raise e.with_prefix(path) from None

    def to_dict(self):
        return {
            "atoms": [[list(atom), weight] for atom, weight in zip(self.atoms, self.weights)]
        }


@dataclass(frozen=True)
class ActivationSpec:
    """A registry activation with optional finite side information."""

    kind: str
    kappa: float = 1.0
    side_info: Optional[SideInformation] = None

    def __post_init__(self):
        if self.kind not in ACTIVATION_REGISTRY:
            raise ConfigError(
                f"unknown activation `{self.kind}`, expected one of "
                f"{sorted(ACTIVATION_REGISTRY)}",
                "kind",
            )

        if not np.isfinite(self.kappa) or self.kappa == 0:
            raise ConfigError("kappa must be finite and nonzero", "kappa")

        object.__setattr__(self, "kappa", float(self.kappa))

    @property
    def is_deterministic(self):
        return self.side_info is None

    @property
    def bound(self):
        """Supremum of |φ| over all inputs and side information."""
        gains = self.side_arrays()[0]
        return float(np.max(np.abs(gains)))

    def side_arrays(self):
        """Gains, shifts and weights of the side information atoms.

        A deterministic activation is reported as the single atom
        ``(1, 0)`` with weight one.
        """
        if self.side_info is None:
            atoms = (DEFAULT_SIDE_ATOM,)
            weights = (1.0,)
        else:
            atoms = self.side_info.atoms
            weights = self.side_info.weights

        atoms = np.array(atoms, dtype=float)
        return atoms[:, 0], atoms[:, 1], np.array(weights, dtype=float)

    def __call__(self, z, gain=1.0, shift=0.0):
        function = ACTIVATION_REGISTRY[self.kind]
        return gain * function(self.kappa * np.asarray(z) + shift)

    @classmethod
    def from_dict(cls, data, path="activation"):
        validate(data, "activation", path)

        kind = data["kind"]
        kappa = data.get("kappa", 1.0)

        side_info = data.get("side_info")
        if side_info is not None:
            side_info = SideInformation.from_dict(side_info, f"{path}.side_info")

        try:
            return cls(kind=kind, kappa=kappa, side_info=side_info)
        except ConfigError as e:
            raise e.with_prefix(path) from None

    def to_dict(self):
        data = {"kind": self.kind, "kappa": self.kappa}
        if self.side_info is not None:
            data["side_info"] = self.side_info.to_dict()

        return data


def _validate_weights(weights, path):
    if len(weights) == 0:
        raise ConfigError("at least one atom is required", path)

    for i, weight in enumerate(weights):
        if not weight > 0:
            raise ConfigError("weights must be strictly positive", f"{path}[{i}]")

    if abs(sum(weights) - 1) > WEIGHT_SUM_TOLERANCE:
        raise ConfigError(
            f"weights must sum to 1 within {WEIGHT_SUM_TOLERANCE}, got {sum(weights)!r}",
            path,
        )
