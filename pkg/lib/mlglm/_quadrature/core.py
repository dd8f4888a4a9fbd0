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

"""Gauss–Hermite rules for expectations over standard normal variables.

``numpy.polynomial.hermite.hermgauss`` integrates against ``e^{-x²}``.
With ``z = √2 x`` and weights divided by ``√π`` the rule integrates
against the standard normal density instead, so that

    E f(G) ≈ Σ_i w_i f(z_i),    Σ_i w_i = 1.
"""

import functools
from dataclasses import dataclass

from mlglm._imports import numpy as np

from mlglm._utilities.errors import DomainError, NumericalError

MIN_ORDER = 2
MAX_ORDER = 512


@dataclass(frozen=True)
class GaussHermiteRule:
    """Nodes and weights of an ``order`` point standard normal rule."""

    order: int
    nodes: "np.ndarray"
    weights: "np.ndarray"

    def __post_init__(self):
        if self.nodes.shape != (self.order,) or self.weights.shape != (self.order,):
            raise ValueError("nodes and weights must both have shape (order,)")

        self.nodes.setflags(write=False)
        self.weights.setflags(write=False)

    def __hash__(self):
        return hash(("GaussHermiteRule", self.order))

    def __eq__(self, other):
        return isinstance(other, GaussHermiteRule) and other.order == self.order

    def expect(self, values):
        """Weighted sum over the last axis of node evaluations."""
        return np.asarray(values) @ self.weights


@functools.lru_cache(maxsize=None)
def rule(order):
    """The ``order`` point Gauss–Hermite rule for the standard normal.

    Parameters
    ----------
    order : int
        Between 2 and 512 inclusive.

    Returns
    -------
    GaussHermiteRule
    """
    if isinstance(order, GaussHermiteRule):
        return order

    if int(order) != order or not MIN_ORDER <= order <= MAX_ORDER:
        raise DomainError(
            f"Quadrature order must be an integer within [{MIN_ORDER}, {MAX_ORDER}], "
            f"got {order!r}"
        )

    order = int(order)
    x, w = np.polynomial.hermite.hermgauss(order)

    nodes = np.sqrt(2.0) * x
    weights = w / np.sqrt(np.pi)

    # Symmetrise so that odd moments vanish to rounding
    nodes = (nodes - nodes[::-1]) / 2
    weights = (weights + weights[::-1]) / 2
    weights = weights / np.sum(weights)

    return GaussHermiteRule(order=order, nodes=nodes, weights=weights)


def _as_rule(order_or_rule):
    if isinstance(order_or_rule, GaussHermiteRule):
        return order_or_rule

    return rule(order_or_rule)


def gauss_expect(f, order_or_rule, d=1):
    """Tensor product expectation of ``f(G_1, ..., G_d)``.

    ``f`` is called once on broadcastable node grids, one per variable,
    and should be vectorised over them. Scalar only callables are
    wrapped with ``numpy.vectorize``.

    Parameters
    ----------
    f : callable
        Function of ``d`` independent standard normal variables.
    order_or_rule : int or GaussHermiteRule
    d : int, optional
        Number of variables, 1 to 3.

    Returns
    -------
    float
    """
    if d not in (1, 2, 3):
        raise DomainError(f"Only 1 to 3 dimensional expectations are supported, got {d}")

    gh_rule = _as_rule(order_or_rule)
    grids = np.ix_(*([gh_rule.nodes] * d))
    shape = (gh_rule.order,) * d

    try:
        values = np.broadcast_to(np.asarray(f(*grids), dtype=float), shape)
    except (TypeError, ValueError):
        values = np.vectorize(f, otypes=[float])(*grids)

    if not np.all(np.isfinite(values)):
        raise NumericalError("Integrand is not finite at every quadrature node")

    result = values
    for _ in range(d):
        result = gh_rule.expect(result)

    return float(result)
