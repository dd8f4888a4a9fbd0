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


"""Hopf formula with the Hamiltonian ``H(p) = (2 / α) p₁ p₂``.

    f(t, x) = sup_z inf_y { z · (x − y) + ψ(y) + t H(z) }

For separable ``ψ`` the infimum over ``y`` splits into the two convex
conjugates and the ``z₁`` supremum collapses onto ``ψ₁`` itself, leaving

    f(t, x) = sup_{0 ≤ z₂ ≤ αρ/2} { z₂ x₂ − ψ₂*(z₂) + ψ₁(x₁ + 2 t z₂ / α) }

where ``x₁ + 2 t z₂ / α`` stays within ``[0, ρ]`` on ``Ω_ρ``. The
remaining scalar supremum is searched on a grid and polished by golden
section within the best cell.
"""

from dataclasses import dataclass

from mlglm._imports import numpy as np

from mlglm._utilities.errors import DomainError, TruncationError

from .initial import DomainOmega, default_truncations

DEFAULT_INNER_GRID = 257
GOLDEN_ITERATIONS = 80
TOUCH_TOLERANCE = 1e-8

_INVERSE_GOLDEN = (np.sqrt(5.0) - 1) / 2


@dataclass
class HopfSolution:
    """Values of ``f`` together with the optimal ``z`` at each point."""

    values: "np.ndarray"
    z1: "np.ndarray"
    z2: "np.ndarray"


def _z2_objective(z2, t, h1, h2, data, y_max):
    conjugate, _ = data.psi2.conjugate(z2, y_max)
    u = np.clip(h1 + 2 * t * z2 / data.alpha, 0.0, data.rho)

    return z2 * h2 - conjugate + data.psi1(u)


def _golden_section(func, low, high, iterations):
    """Vectorised golden section maximisation on ``[low, high]``."""
    c = high - _INVERSE_GOLDEN * (high - low)
    d = low + _INVERSE_GOLDEN * (high - low)
    fc = func(c)
    fd = func(d)

    for _ in range(iterations):
        left = fc >= fd

        high = np.where(left, d, high)
        low = np.where(left, low, c)

        new_c = high - _INVERSE_GOLDEN * (high - low)
        new_d = low + _INVERSE_GOLDEN * (high - low)

        c, d = np.where(left, new_c, d), np.where(left, c, new_d)
        fc, fd = np.where(left, func(c), fd), np.where(left, fc, func(d))

    middle = (low + high) / 2
    return middle, func(middle)


def hopf_values(
    t,
    h1,
    h2,
    data,
    r_cap=None,
    y_max=None,
    inner_grid=DEFAULT_INNER_GRID,
    golden_iterations=GOLDEN_ITERATIONS,
):
    """Evaluate the Hopf formula at broadcastable arrays of points.

    Parameters
    ----------
    t, h1, h2 : array_like
        Points of ``Ω_ρ``.
    data : SeparableInitialData
    r_cap : float, optional
        Truncation of ``z₁``.
    y_max : float, optional
        Truncation of ``y₂``, no smaller than the end of the ``ψ₂`` table.
        Defaults to the larger of that end and ``default_truncations``.
    inner_grid : int, optional
        Grid points of the ``z₂`` search before golden section polishing.

    Returns
    -------
    HopfSolution

    Raises
    ------
    DomainError
        A point lies outside of ``Ω_ρ`` or ``y_max`` cuts into the ``ψ₂``
        table.
    TruncationError
        An optimum touches ``r_cap`` or ``y_max``.
    """
    t, h1, h2 = np.broadcast_arrays(
        *(np.asarray(value, dtype=float) for value in (t, h1, h2))
    )
    shape = t.shape
    t, h1, h2 = (np.ravel(value) for value in (t, h1, h2))

    DomainOmega(data.rho).check(t, h1, h2)

    if inner_grid < 3:
        raise DomainError("inner_grid must be at least 3")

    default_r_cap, default_y_max = default_truncations(
        data.psi1, data.alpha, float(np.max(h2, initial=0.0))
    )
    r_cap = default_r_cap if r_cap is None else r_cap
    if y_max is None:
        y_max = max(default_y_max, data.psi2.end)
    elif y_max < data.psi2.end:
        raise DomainError(
            f"y_max={y_max!r} lies below the end of the psi2 table at {data.psi2.end!r}"
        )

    def objective(z2):
        return _z2_objective(z2, t, h1, h2, data, y_max)

    grid = np.linspace(0.0, data.z2_max, inner_grid)
    grid_values = _z2_objective(
        grid[None, :], t[:, None], h1[:, None], h2[:, None], data, y_max
    )
    best = np.argmax(grid_values, axis=1)
    grid_best = grid_values[np.arange(len(best)), best]

    low = grid[np.maximum(best - 1, 0)]
    high = grid[np.minimum(best + 1, inner_grid - 1)]
    polished, polished_values = _golden_section(objective, low, high, golden_iterations)

    improved = polished_values > grid_best
    z2 = np.where(improved, polished, grid[best])
    values = np.where(improved, polished_values, grid_best)

    u = np.clip(h1 + 2 * t * z2 / data.alpha, 0.0, data.rho)
    z1 = data.psi1.subgradient(u)

    if np.any(z1 >= r_cap):
        raise TruncationError(f"The z1 optimum touches R_CAP={r_cap:g}")

    if np.any(z2 > data.psi2.terminal_slope + TOUCH_TOLERANCE):
        raise TruncationError(f"The y2 optimum touches Y_MAX={y_max:g}")

    if not np.all(np.isfinite(values)):
        raise TruncationError("The Hopf formula produced non-finite values")

    return HopfSolution(
        values=values.reshape(shape), z1=z1.reshape(shape), z2=z2.reshape(shape)
    )


def hopf_evaluate(t, x, data, r_cap=None, inner_grid=DEFAULT_INNER_GRID, y_max=None):
    """``f(t, x)`` at a single point of ``Ω_ρ``.

    Examples
    --------
    >>> from mlglm.hopf import SeparableInitialData, hopf_evaluate, linear
    >>> data = SeparableInitialData.from_callables(
    ...     linear(0.5), linear(0.25), alpha=1.0, rho=1.0, psi2_end=8.0
    ... )
    >>> round(hopf_evaluate(0.5, (0.2, 1.0), data), 6)
    0.475
    """
    h1, h2 = x
    solution = hopf_values(t, h1, h2, data, r_cap=r_cap, y_max=y_max, inner_grid=inner_grid)

    return float(solution.values)
