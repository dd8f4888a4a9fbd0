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


"""Grid search of the nested sup-inf.

The stages of the nested sup-inf only talk to each other through
``y^(l+1)₂``, so the whole alternation is evaluated as a recursion of
one layer value functions

    V_l(s) = sup_z inf_y { ψ₁(y₁) + ψ₂(y₂) − y·z + (2 / α_{l-1}) z₁ z₂ }

with ``ψ₁ = α_l Ψ_l(·, s; ρ_{l-1})`` and ``ψ₂ = Ψ₀`` for the first layer,
``ψ₂ = V_{l-1} + (α_{l-1} / 2)(1 + ρ_{l-1} ·)`` above it. The inner
infimum splits over ``y₁`` and ``y₂``. Each refinement round keeps the
number of grid points and shrinks the box to four cells of the previous
round around the incumbent.
"""

import concurrent.futures
import logging
from dataclasses import dataclass, field
from typing import List, Tuple

from mlglm._imports import numpy as np

from mlglm._potentials import PotentialRules, psi0, psi_layer
from mlglm._utilities.errors import (
    DomainError,
    TruncationError,
    UnsupportedMethodError,
)

from .objective import (
    SaddlePointResult,
    SaddleVariables,
    default_caps,
    stationarity_residual,
)

MAX_GRID_LAYERS = 2
MIN_RESOLUTION = 8
REFINE_HALF_WIDTH = 2


@dataclass
class StageSolution:
    value: float
    y: Tuple[float, float]
    z: Tuple[float, float]
    round_values: List[float] = field(default_factory=list)
    cell_variation: float = 0.0


def _evaluate(func, points, threads):
    if threads > 1 and len(points) > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=threads) as executor:
            return np.array(list(executor.map(func, points)))

    return np.array([func(point) for point in points])


def _refined_box(grid, index):
    low = grid[max(index - REFINE_HALF_WIDTH, 0)]
    high = grid[min(index + REFINE_HALF_WIDTH, len(grid) - 1)]
    return low, high


def _argmin_box(grid, argmins, z_low_index, z_high_index):
    low = min(argmins[z_low_index], argmins[z_high_index])
    high = max(argmins[z_low_index], argmins[z_high_index])
    return grid[max(low - 1, 0)], grid[min(high + 1, len(grid) - 1)]


def stage_value(
    psi1,
    psi2,
    alpha_prev,
    rho_prev,
    r_cap,
    y_max,
    resolution=16,
    refine_rounds=3,
    threads=1,
):
    """Grid sup-inf of a single layer stage.

    Parameters
    ----------
    psi1, psi2 : callable
        The two separable parts of the stage objective in ``y₁`` and ``y₂``.
    alpha_prev, rho_prev : float
        ``α_{l-1}`` and ``ρ_{l-1}``, fixing the coupling and the boxes.
    r_cap, y_max : float
        Truncations of ``z₁`` and ``y₂``.
    resolution : int
        Grid points per variable and per round.
    refine_rounds : int

    Returns
    -------
    StageSolution
    """
    boxes = {
        "z1": (0.0, r_cap),
        "z2": (0.0, alpha_prev * rho_prev / 2),
        "y1": (0.0, rho_prev),
        "y2": (0.0, y_max),
    }
    coupling = 2.0 / alpha_prev

    solution = None
    round_values = []

    for round_index in range(refine_rounds + 1):
        grids = {
            name: np.linspace(low, high, resolution) for name, (low, high) in boxes.items()
        }

        psi1_values = _evaluate(psi1, grids["y1"], threads)
        psi2_values = _evaluate(psi2, grids["y2"], threads)

        # Rows hold z, columns hold y
        inner1 = psi1_values[None, :] - grids["z1"][:, None] * grids["y1"][None, :]
        inner2 = psi2_values[None, :] - grids["z2"][:, None] * grids["y2"][None, :]
        argmin1 = np.argmin(inner1, axis=1)
        argmin2 = np.argmin(inner2, axis=1)
        min1 = inner1[np.arange(resolution), argmin1]
        min2 = inner2[np.arange(resolution), argmin2]

        objective = (
            min1[:, None] + min2[None, :] + coupling * grids["z1"][:, None] * grids["z2"][None, :]
        )
        i, j = np.unravel_index(np.argmax(objective), objective.shape)

        z1, z2 = grids["z1"][i], grids["z2"][j]
        y1, y2 = grids["y1"][argmin1[i]], grids["y2"][argmin2[j]]

        if z1 >= r_cap:
            raise TruncationError(f"The z1 optimum touches R_CAP={r_cap:g}")

        if y2 >= y_max:
            raise TruncationError(f"The y2 optimum touches Y_MAX={y_max:g}")

        value = float(objective[i, j])
        round_values.append(value)

        neighbours = objective[
            max(i - 1, 0) : i + 2,
            max(j - 1, 0) : j + 2,
        ]
        cell_variation = float(np.max(np.abs(neighbours - value)))

        logging.debug(
            "Grid round %s: value=%.10f z=(%.6g, %.6g) y=(%.6g, %.6g)",
            round_index,
            value,
            z1,
            z2,
            y1,
            y2,
        )

        solution = StageSolution(
            value=value,
            y=(float(y1), float(y2)),
            z=(float(z1), float(z2)),
            round_values=list(round_values),
            cell_variation=cell_variation,
        )

        z1_low = max(i - REFINE_HALF_WIDTH, 0)
        z1_high = min(i + REFINE_HALF_WIDTH, resolution - 1)
        z2_low = max(j - REFINE_HALF_WIDTH, 0)
        z2_high = min(j + REFINE_HALF_WIDTH, resolution - 1)

        boxes = {
            "z1": _refined_box(grids["z1"], i),
            "z2": _refined_box(grids["z2"], j),
            "y1": _argmin_box(grids["y1"], argmin1, z1_low, z1_high),
            "y2": _argmin_box(grids["y2"], argmin2, z2_low, z2_high),
        }

    return solution


class _ValueFunctions:
    """Cached layer value functions ``V_l(s)`` of one model."""

    def __init__(self, model, rho, rules, caps, resolution, refine_rounds, threads):
        self.model = model
        self.rho = rho
        self.rules = rules
        self.r_cap, self.y_max = caps
        self.resolution = resolution
        self.refine_rounds = refine_rounds
        self.threads = threads
        self._cache = {}

    def solve(self, layer, s):
        key = (layer, float(s))
        try:
            return self._cache[key]
        except KeyError:
            pass

        alphas = self.model.alphas
        alpha_prev = alphas[layer - 1]
        rho_prev = self.rho[layer - 1]
        activation = self.model.activations[layer - 1]

        def psi1(y1):
            return alphas[layer] * psi_layer(y1, s, rho_prev, activation, self.rules)

        if layer == 1:

            def psi2(y2):
                return psi0(y2, self.model.prior, self.rules.prior)

            threads = 1
        else:

            def psi2(y2):
                return self.solve(layer - 1, y2).value + alpha_prev / 2 * (
                    1 + rho_prev * y2
                )

            threads = self.threads

        solution = stage_value(
            psi1,
            psi2,
            alpha_prev,
            rho_prev,
            self.r_cap,
            self.y_max,
            self.resolution,
            self.refine_rounds,
            threads,
        )
        self._cache[key] = solution

        return solution


def solve_grid(
    model,
    rho,
    resolution=16,
    refine_rounds=3,
    rules=None,
    caps=None,
    threads=1,
):
    """Nested grid search with local refinement, for one or two layers.

    Parameters
    ----------
    model : ModelSpec
    rho : RhoSequence
    resolution : int, optional
        Grid points per variable and per round, at least 8.
    refine_rounds : int, optional
    rules : PotentialRules, optional
    caps : (float, float), optional
        ``(R_CAP, Y_MAX)``, see ``default_caps``.
    threads : int, optional

    Returns
    -------
    SaddlePointResult
    """
    if model.L > MAX_GRID_LAYERS:
        raise UnsupportedMethodError(
            f"Grid search supports at most {MAX_GRID_LAYERS} layers, the model has "
            f"{model.L}; use solve_fixed_point instead"
        )

    if resolution < MIN_RESOLUTION:
        raise DomainError(f"resolution must be at least {MIN_RESOLUTION}")

    if refine_rounds < 0:
        raise DomainError("refine_rounds must be nonnegative")

    if rules is None:
        rules = PotentialRules()

    if caps is None:
        caps = default_caps(model, rho)

    logging.info(
        "Grid saddle search: L=%s beta=%s resolution=%s refine_rounds=%s",
        model.L,
        model.beta,
        resolution,
        refine_rounds,
    )

    value_functions = _ValueFunctions(
        model, rho, rules, caps, resolution, refine_rounds, threads
    )

    stages = [None] * model.L
    s = model.beta
    for layer in range(model.L, 0, -1):
        stages[layer - 1] = value_functions.solve(layer, s)
        s = stages[layer - 1].y[1]

    variables = SaddleVariables(
        y=tuple(stage.y for stage in stages), z=tuple(stage.z for stage in stages)
    )
    top = stages[-1]

    residual = stationarity_residual(variables, model, rho, rules, caps=caps)

    round_changes = list(np.abs(np.diff(top.round_values)))

    return SaddlePointResult(
        variables=variables,
        value=top.value,
        method="grid",
        residual=residual,
        iterations=refine_rounds + 1,
        diagnostics={
            "resolution": resolution,
            "refine_rounds": refine_rounds,
            "round_values": top.round_values,
            "round_changes": [float(change) for change in round_changes],
            "cell_variation": top.cell_variation,
            "layer_cell_variation": [stage.cell_variation for stage in stages],
            "caps": {"R_CAP": caps[0], "Y_MAX": caps[1]},
            "stage_evaluations": len(value_functions._cache),  # pylint: disable = protected-access
        },
    )
