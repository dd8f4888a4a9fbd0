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


"""The limit objective and its box constrained variables.

For layers ``l = 1, ..., L`` the variables are ``y^(l) = (y₁, y₂)`` in
``[0, ρ_{l-1}] × R₊`` and ``z^(l) = (z₁, z₂)`` in
``R₊ × [0, α_{l-1} ρ_{l-1} / 2]``. The objective is

    α_L Ψ_L(y^(L)₁, β; ρ_{L-1})
      + Σ_{l<L} α_l Ψ_l(y^(l)₁, y^(l+1)₂; ρ_{l-1}) + Ψ₀(y^(1)₂)
      + Σ_l (−y^(l)·z^(l) + (2 / α_{l-1}) z^(l)₁ z^(l)₂)
      + Σ_{l≥2} (α_{l-1} / 2)(1 + ρ_{l-1} y^(l)₂)

and the limit of the free energy is its nested sup-inf, outermost over
layer ``L``.
"""

from dataclasses import dataclass, field
from typing import Dict, Tuple

from mlglm._imports import numpy as np

from mlglm._potentials import (
    DEFAULT_STEP,
    PotentialPoint,
    PotentialRules,
    psi0,
    psi0_derivative,
    psi_layer,
    psi_partial,
)
from mlglm._utilities.errors import DomainError, TruncationError

CAP_FACTOR = 8.0


def hamiltonian(p, alpha):
    """``H(p) = (2 / α) p₁ p₂``."""
    p1, p2 = p
    return 2.0 / alpha * p1 * p2


def default_caps(model, rho):
    """Truncations ``R_CAP`` of ``z₁`` and ``Y_MAX`` of ``y₂``.

    Both default to ``8 · max(β, 1) · max_l α_l · max_l ρ_l``.
    """
    cap = CAP_FACTOR * max(model.beta, 1.0) * max(model.alphas) * rho.max
    return cap, cap


@dataclass(frozen=True)
class SaddleVariables:
    """Per layer pairs ``y^(l)`` and ``z^(l)``, index 0 holding layer 1."""

    y: Tuple[Tuple[float, float], ...]
    z: Tuple[Tuple[float, float], ...]

    def __post_init__(self):
        y = tuple((float(a), float(b)) for a, b in self.y)
        z = tuple((float(a), float(b)) for a, b in self.z)

        if len(y) != len(z):
            raise DomainError("y and z must hold one pair per layer")

        object.__setattr__(self, "y", y)
        object.__setattr__(self, "z", z)

    @property
    def L(self):  # pylint: disable = invalid-name
        return len(self.y)

    @classmethod
    def zeros(cls, L):  # pylint: disable = invalid-name
        return cls(y=((0.0, 0.0),) * L, z=((0.0, 0.0),) * L)

    def as_array(self):
        """Shape ``(L, 4)`` with columns ``y₁, y₂, z₁, z₂``."""
        return np.array([y + z for y, z in zip(self.y, self.z)], dtype=float)

    @classmethod
    def from_array(cls, array):
        array = np.asarray(array, dtype=float)
        return cls(
            y=tuple((row[0], row[1]) for row in array),
            z=tuple((row[2], row[3]) for row in array),
        )

    def to_dict(self):
        return {
            f"layer_{index}": {"y": list(y), "z": list(z)}
            for index, (y, z) in enumerate(zip(self.y, self.z), start=1)
        }


def box_bounds(model, rho, caps=None):
    """Lower and upper bounds of ``SaddleVariables.as_array``."""
    if caps is None:
        caps = default_caps(model, rho)

    r_cap, y_max = caps
    alphas = model.alphas

    lower = np.zeros((model.L, 4))
    upper = np.array(
        [
            [rho[l - 1], y_max, r_cap, alphas[l - 1] * rho[l - 1] / 2]
            for l in range(1, model.L + 1)
        ]
    )

    return lower, upper


def project(array, model, rho, caps=None):
    """Clip an ``(L, 4)`` array of saddle variables onto the boxes."""
    lower, upper = box_bounds(model, rho, caps)
    return np.clip(np.asarray(array, dtype=float), lower, upper)


def check_caps(variables, caps, atol=0.0):
    """Raise ``TruncationError`` when an optimum reaches ``R_CAP`` or ``Y_MAX``.

    Values within ``atol`` of a cap count as touching it.
    """
    r_cap, y_max = caps

    for layer, (y, z) in enumerate(zip(variables.y, variables.z), start=1):
        if z[0] >= r_cap - atol:
            raise TruncationError(
                f"The z1 optimum of layer {layer} touches R_CAP={r_cap:g} ({z[0]!r})"
            )

        if y[1] >= y_max - atol:
            raise TruncationError(
                f"The y2 optimum of layer {layer} touches Y_MAX={y_max:g} ({y[1]!r})"
            )


def check_boxes(variables, model, rho, caps=None):
    lower, upper = box_bounds(model, rho, caps)
    array = variables.as_array()

    if array.shape != lower.shape:
        raise DomainError(
            f"Expected {model.L} layers of saddle variables, got {variables.L}"
        )

    outside = (array < lower) | (array > upper)
    if np.any(outside):
        layer, column = np.argwhere(outside)[0]
        name = ("y1", "y2", "z1", "z2")[column]
        raise DomainError(
            f"Saddle variable {name} of layer {layer + 1} = {array[layer, column]!r} "
            f"lies outside [{lower[layer, column]!r}, {upper[layer, column]!r}]"
        )


def layer_input(variables, model, layer):
    """The ``h₂`` argument of ``Ψ_layer``, ``y^(layer+1)₂`` or ``β``."""
    if layer == model.L:
        return model.beta

    return variables.y[layer][1]


def phi_objective(variables, model, rho, rules=None, caps=None):
    """Evaluate the limit objective at ``variables``.

    Parameters
    ----------
    variables : SaddleVariables
    model : ModelSpec
    rho : RhoSequence
    rules : PotentialRules, optional

    Returns
    -------
    float
    """
    if rules is None:
        rules = PotentialRules()

    check_boxes(variables, model, rho, caps)

    alphas = model.alphas
    value = psi0(variables.y[0][1], model.prior, rules.prior)

    for l in range(1, model.L + 1):
        y = variables.y[l - 1]
        z = variables.z[l - 1]

        value += alphas[l] * psi_layer(
            y[0], layer_input(variables, model, l), rho[l - 1], model.activations[l - 1], rules
        )
        value += -(y[0] * z[0] + y[1] * z[1]) + hamiltonian(z, alphas[l - 1])

        if l >= 2:
            value += alphas[l - 1] / 2 * (1 + rho[l - 1] * y[1])

    return float(value)


def stationarity_map(variables, model, rho, rules=None, step=DEFAULT_STEP):
    """One unprojected application of the first order conditions.

    Returns
    -------
    np.ndarray
        Shape ``(L, 4)`` with columns ``y₁, y₂, z₁, z₂``.
    """
    if rules is None:
        rules = PotentialRules()

    alphas = model.alphas
    updated = np.empty((model.L, 4))

    for l in range(1, model.L + 1):
        y = variables.y[l - 1]
        z = variables.z[l - 1]
        activation = model.activations[l - 1]

        updated[l - 1, 0] = 2 / alphas[l - 1] * z[1]
        updated[l - 1, 1] = 2 / alphas[l - 1] * z[0]

        point = PotentialPoint(y[0], layer_input(variables, model, l), rho[l - 1])
        updated[l - 1, 2] = alphas[l] * psi_partial("h1", point, activation, rules, step)

        if l == 1:
            updated[0, 3] = psi0_derivative(y[1], model.prior, rules.prior, step)
        else:
            below = variables.y[l - 2]
            below_point = PotentialPoint(below[0], y[1], rho[l - 2])
            updated[l - 1, 3] = (
                alphas[l - 1]
                * psi_partial("h2", below_point, model.activations[l - 2], rules, step)
                + alphas[l - 1] * rho[l - 1] / 2
            )

    return updated


def stationarity_residual(variables, model, rho, rules=None, step=DEFAULT_STEP, caps=None):
    """Largest violation of the projected first order conditions."""
    target = project(
        stationarity_map(variables, model, rho, rules, step), model, rho, caps
    )

    return float(np.max(np.abs(target - variables.as_array())))


@dataclass
class SaddlePointResult:
    """Incumbent of a saddle solver together with its diagnostics."""

    variables: SaddleVariables
    value: float
    method: str
    residual: float
    iterations: int
    diagnostics: Dict[str, object] = field(default_factory=dict)

    def to_dict(self):
        return {
            "method": self.method,
            "value": self.value,
            "residual": self.residual,
            "iterations": self.iterations,
            "variables": self.variables.to_dict(),
            "diagnostics": self.diagnostics,
        }
