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


"""Scalar channel density and the prior and layer potentials.

The prior potential is

    Ψ₀(r) = E log Σ_b P(b) exp(r X b + √r G b − r b² / 2)

and the layer potential, for ``h = (h₁, h₂) ∈ [0, ρ] × R₊``, is

    Ψ_l(h; ρ) = E log ∫ P̃_{h₂}(Y | √h₁ V + √(ρ − h₁) w) dN(w)

with ``Y = √h₂ φ(√h₁ V + √(ρ − h₁) W, A) + Z`` and ``V, W, Z, w``
independent standard normals. Every logarithm of a sum is evaluated as
a shifted log-sum-exp.
"""

import functools
import math
from dataclasses import dataclass

from mlglm._imports import numpy as np
from mlglm._imports import scipy

from mlglm._quadrature import rule
from mlglm._utilities.errors import DomainError, NumericalError

H2_LIMIT = 1e4
BOX_TOLERANCE = 1e-12
DEFAULT_STEP = 1e-4


@dataclass(frozen=True)
class PotentialRules:
    """Quadrature orders used by the potentials.

    Parameters
    ----------
    outer : int
        Order of each axis of the outer three dimensional tensor rule of Ψ_l.
    inner : int
        Order of the one dimensional rule inside the logarithm of Ψ_l.
    prior : int
        Order of the rule over the Gaussian of Ψ₀.
    """

    outer: int = 40
    inner: int = 60
    prior: int = 80

    @classmethod
    def coarse(cls):
        """Cheap orders for exploratory runs and unit tests."""
        return cls(outer=16, inner=24, prior=40)

    @classmethod
    def from_dict(cls, data):
        return cls(**data)

    def to_dict(self):
        return {"outer": self.outer, "inner": self.inner, "prior": self.prior}


@dataclass(frozen=True)
class PotentialPoint:
    """A point ``h`` of the layer potential box ``[0, ρ] × R₊``."""

    h1: float
    h2: float
    rho: float

    def __post_init__(self):
        h1, h2, rho = _check_box(self.h1, self.h2, self.rho)
        object.__setattr__(self, "h1", h1)
        object.__setattr__(self, "h2", h2)
        object.__setattr__(self, "rho", rho)


def _check_box(h1, h2, rho):
    h1, h2, rho = float(h1), float(h2), float(rho)

    if not rho > 0:
        raise DomainError(f"rho must be positive, got {rho!r}")

    if -BOX_TOLERANCE * rho <= h1 < 0:
        h1 = 0.0
    elif rho < h1 <= rho * (1 + BOX_TOLERANCE):
        h1 = rho

    if not 0 <= h1 <= rho:
        raise DomainError(f"h1={h1!r} lies outside of [0, rho={rho!r}]")

    if not h2 >= 0:
        raise DomainError(f"h2 must be nonnegative, got {h2!r}")

    if h2 > H2_LIMIT:
        raise NumericalError(
            f"h2={h2!r} exceeds the supported range h2 <= {H2_LIMIT:g}"
        )

    return h1, h2, rho


def channel_density(y, z, h2, act):
    """``P̃_{h₂}(y | z) = Σ_a P(a) exp(−(y − √h₂ φ(z, a))² / 2)``.

    Vectorised over broadcastable ``y`` and ``z``.
    """
    if not h2 >= 0:
        raise DomainError(f"h2 must be nonnegative, got {h2!r}")

    return np.exp(log_channel_density(y, z, h2, act))


def log_channel_density(y, z, h2, act):
    gains, shifts, weights = act.side_arrays()
    y = np.asarray(y, dtype=float)[..., None]
    z = np.asarray(z, dtype=float)[..., None]

    exponent = -0.5 * (y - math.sqrt(h2) * act(z, gains, shifts)) ** 2
    result = scipy.special.logsumexp(exponent, axis=-1, b=weights)

    if result.ndim == 0:
        return float(result)

    return result


def psi0(r, prior, order_or_rule=None):
    """Prior potential ``Ψ₀(r)``, exactly zero at ``r = 0``."""
    r = float(r)
    if not r >= 0:
        raise DomainError(f"r must be nonnegative, got {r!r}")

    if r == 0:
        return 0.0

    if order_or_rule is None:
        order_or_rule = PotentialRules().prior

    return _psi0(r, prior, rule(order_or_rule).order)


@functools.lru_cache(maxsize=65536)
def _psi0(r, prior, order):
    gh_rule = rule(order)
    values = prior.values
    weights = prior.weights

    planted = values[:, None, None]
    noise = gh_rule.nodes[None, :, None]
    candidate = values[None, None, :]

    exponent = (
        r * planted * candidate + math.sqrt(r) * noise * candidate - r * candidate**2 / 2
    )
    log_inner = scipy.special.logsumexp(exponent, axis=-1, b=weights)

    return float(weights @ gh_rule.expect(log_inner))


def psi_layer(h1, h2, rho, act, rules=None):
    """Layer potential ``Ψ_l(h₁, h₂; ρ)``.

    Parameters
    ----------
    h1 : float
        Within ``[0, rho]``.
    h2 : float
        Within ``[0, 1e4]``.
    rho : float
        Second moment of the layer input.
    act : ActivationSpec
    rules : PotentialRules, optional

    Returns
    -------
    float
    """
    h1, h2, rho = _check_box(h1, h2, rho)

    if rules is None:
        rules = PotentialRules()

    if h1 == rho:
        return _psi_layer_collapsed(h2, rho, act, rules.outer)

    return _psi_layer(h1, h2, rho, act, rules.outer, rules.inner)


@functools.lru_cache(maxsize=65536)
def _psi_layer(h1, h2, rho, act, outer_order, inner_order):
    outer = rule(outer_order)
    inner = rule(inner_order)
    gains, shifts, atom_weights = act.side_arrays()

    sqrt_h1 = math.sqrt(h1)
    sqrt_spread = math.sqrt(rho - h1)
    sqrt_h2 = math.sqrt(h2)

    nodes = outer.nodes

    planted_preactivation = sqrt_h1 * nodes[:, None] + sqrt_spread * nodes[None, :]
    planted = act(planted_preactivation[..., None], gains, shifts)

    # Axes (V, W, Z, A)
    observation = (
        sqrt_h2 * planted[:, :, None, :] + nodes[None, None, :, None]
    )

    candidate_preactivation = sqrt_h1 * nodes[:, None] + sqrt_spread * inner.nodes[None, :]
    candidate = sqrt_h2 * act(candidate_preactivation[..., None], gains, shifts)

    inner_weights = inner.weights[:, None] * atom_weights[None, :]

    total = 0.0
    for i, outer_weight in enumerate(outer.weights):
        difference = (
            observation[i][..., None, None] - candidate[i][None, None, None, :, :]
        )
        log_inner = scipy.special.logsumexp(
            -0.5 * difference**2, axis=(-2, -1), b=inner_weights
        )

        contribution = np.einsum(
            "wza,w,z,a->", log_inner, outer.weights, outer.weights, atom_weights
        )
        total += outer_weight * contribution

    if not math.isfinite(total):
        raise NumericalError(
            f"Non-finite layer potential at h1={h1!r}, h2={h2!r}, rho={rho!r}"
        )

    return float(total)


@functools.lru_cache(maxsize=65536)
def _psi_layer_collapsed(h2, rho, act, outer_order):
    outer = rule(outer_order)
    gains, shifts, atom_weights = act.side_arrays()
    sqrt_h2 = math.sqrt(h2)

    nodes = outer.nodes
    signal = act(math.sqrt(rho) * nodes[:, None], gains, shifts)

    # Axes (V, Z, A) for the planted side information, candidate last
    observation = sqrt_h2 * signal[:, None, :] + nodes[None, :, None]
    difference = observation[..., None] - sqrt_h2 * signal[:, None, None, :]
    log_inner = scipy.special.logsumexp(
        -0.5 * difference**2, axis=-1, b=atom_weights
    )

    total = np.einsum("vza,v,z,a->", log_inner, outer.weights, outer.weights, atom_weights)

    if not math.isfinite(total):
        raise NumericalError(f"Non-finite layer potential at h1=rho={rho!r}, h2={h2!r}")

    return float(total)


def _difference(func, x, lower, upper, step):
    if x - step >= lower and (upper is None or x + step <= upper):
        return (func(x + step) - func(x - step)) / (2 * step)

    if x - step < lower:
        if upper is not None and x + 2 * step > upper:
            raise DomainError("The box is narrower than the finite difference stencil")

        return (-3 * func(x) + 4 * func(x + step) - func(x + 2 * step)) / (2 * step)

    if x - 2 * step < lower:
        raise DomainError("The box is narrower than the finite difference stencil")

    return (3 * func(x) - 4 * func(x - step) + func(x - 2 * step)) / (2 * step)


def psi_partial(which, point, act, rules=None, step=DEFAULT_STEP):
    """Finite difference partial derivative of ``Ψ_l``.

    Central differences are used in the interior and second order
    one-sided differences within ``step`` of an edge of the box. The
    step is relative, ``step · ρ`` along ``h1`` and
    ``step · max(1, h2)`` along ``h2``.

    Parameters
    ----------
    which : {"h1", "h2"}
    point : PotentialPoint
    act : ActivationSpec
    rules : PotentialRules, optional
    step : float, optional

    Returns
    -------
    float
    """
    if not step > 0:
        raise DomainError(f"The finite difference step must be positive, got {step!r}")

    if not isinstance(point, PotentialPoint):
        point = PotentialPoint(*point)

    if which == "h1":
        absolute_step = step * point.rho

        def func(h1):
            return psi_layer(h1, point.h2, point.rho, act, rules)

        return _difference(func, point.h1, 0.0, point.rho, absolute_step)

    if which == "h2":
        absolute_step = step * max(1.0, point.h2)

        def func(h2):
            return psi_layer(point.h1, h2, point.rho, act, rules)

        return _difference(func, point.h2, 0.0, None, absolute_step)

    raise DomainError(f"`which` must be 'h1' or 'h2', got {which!r}")


def psi0_derivative(r, prior, order_or_rule=None, step=DEFAULT_STEP):
    """Finite difference ``Ψ₀′(r)`` with a relative step ``step · max(1, r)``."""
    if not step > 0:
        raise DomainError(f"The finite difference step must be positive, got {step!r}")

    def func(value):
        return psi0(value, prior, order_or_rule)

    return _difference(func, float(r), 0.0, None, step * max(1.0, float(r)))
