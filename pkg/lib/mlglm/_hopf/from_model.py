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


"""Initial data whose Hopf solution at ``(1, 0)`` is the free energy limit.

The top layer supplies ``ψ₁ = α_L Ψ_L(·, β; ρ_{L-1})``. Below it
``ψ₂`` is the prior potential ``Ψ₀`` for a single layer, and the limit
``V_{L-1}`` of the model truncated to ``L − 1`` layers at noise level
``h₂`` (shifted by ``(α_{L-1} / 2)(1 + ρ_{L-1} h₂)``) otherwise.
"""

import logging

from mlglm._imports import numpy as np
from mlglm._imports import tqdm

from mlglm._model import RhoSequence
from mlglm._potentials import PotentialRules, psi0, psi_layer
from mlglm._saddle import solve

from .initial import (
    H2_MAX_FACTOR,
    SeparableInitialData,
    TabulatedFunction,
    clip_slopes,
    default_truncations,
    lower_convex_hull,
)

PSI1_POINTS = 33
PRIOR_POINTS = 257
VALUE_FUNCTION_POINTS = 33


def _tabulate(func, end, points, progress=False):
    x = np.linspace(0.0, end, points)
    values = [func(value) for value in tqdm.tqdm(x, disable=not progress)]
    return TabulatedFunction(x=x, values=np.array(values))


def _convex_nondecreasing(table, max_slope=None):
    hull = lower_convex_hull(table)
    high = np.inf if max_slope is None else max_slope
    return clip_slopes(hull, 0.0, high)


def model_initial_data(
    model,
    rho,
    rules=None,
    psi1_points=PSI1_POINTS,
    psi2_points=None,
    psi2_end=None,
    method="auto",
    progress=False,
    **solver_kwargs,
):
    """Tabulate the separable initial data of the top layer of ``model``.

    The tables are replaced by their greatest convex minorant with slopes
    clipped into the admissible ranges, absorbing quadrature and solver
    noise.

    Parameters
    ----------
    model : ModelSpec
    rho : RhoSequence
    rules : PotentialRules, optional
    psi1_points, psi2_points : int, optional
    psi2_end : float, optional
        End of the ``ψ₂`` table, by default ``4 α ρ + 2 R_CAP / α``.
    method : str, optional
        Saddle method of the truncated models for two or more layers.

    Returns
    -------
    SeparableInitialData
    """
    if rules is None:
        rules = PotentialRules()

    L = model.L  # pylint: disable = invalid-name
    alphas = model.alphas
    alpha = alphas[L - 1]
    rho_below = rho[L - 1]
    top_activation = model.activations[-1]

    logging.info("Tabulating the top layer initial datum of an L=%s model", L)
    psi1 = _tabulate(
        lambda u: alphas[L] * psi_layer(u, model.beta, rho_below, top_activation, rules),
        rho_below,
        psi1_points,
    )
    psi1 = _convex_nondecreasing(psi1)

    if psi2_end is None:
        _, psi2_end = default_truncations(psi1, alpha, H2_MAX_FACTOR * alpha * rho_below)

    if L == 1:
        if psi2_points is None:
            psi2_points = PRIOR_POINTS

        psi2 = _tabulate(lambda r: psi0(r, model.prior, rules.prior), psi2_end, psi2_points)
    else:
        if psi2_points is None:
            psi2_points = VALUE_FUNCTION_POINTS

        below = RhoSequence(values=rho.values[:L])

        def value_function(h2):
            result = solve(
                model.truncated(L - 1, beta=float(h2)), below, method, rules=rules, **solver_kwargs
            )
            return result.value + alpha / 2 * (1 + rho_below * h2)

        logging.info(
            "Tabulating the depth %s value function at %s noise levels", L - 1, psi2_points
        )
        psi2 = _tabulate(value_function, psi2_end, psi2_points, progress=progress)

    psi2 = _convex_nondecreasing(psi2, max_slope=alpha * rho_below / 2)

    return SeparableInitialData(psi1=psi1, psi2=psi2, alpha=alpha, rho=rho_below)

