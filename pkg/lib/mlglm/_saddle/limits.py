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

import logging

from mlglm._model import RhoSequence, dims
from mlglm._utilities.errors import DomainError

from .fixedpoint import solve_fixed_point
from .grid import MAX_GRID_LAYERS, solve_grid


def solve(model, rho, method="fixed-point", **kwargs):
    """Dispatch to ``solve_grid`` or ``solve_fixed_point``.

    ``method="auto"`` uses the grid for up to two layers.
    """
    if method == "auto":
        method = "grid" if model.L <= MAX_GRID_LAYERS else "fixed-point"

    if method == "grid":
        return solve_grid(model, rho, **kwargs)

    if method == "fixed-point":
        return solve_fixed_point(model, rho, **kwargs)

    raise DomainError(f"Unknown saddle method {method!r}")


def layer_limits(model, rho, method="auto", **kwargs):
    """Limits of the free energy of the models truncated to 1, ..., L layers.

    The truncated models keep the noise level ``beta`` of ``model`` on
    their last layer.

    Returns
    -------
    list of SaddlePointResult
    """
    results = []
    for depth in range(1, model.L + 1):
        truncated = model.truncated(depth)
        truncated_rho = RhoSequence(values=rho.values[: depth + 1])

        result = solve(truncated, truncated_rho, method, **kwargs)
        logging.info("Depth %s limit: %.8f (%s)", depth, result.value, result.method)
        results.append(result)

    return results


def mutual_information(free_energy, model, n=None):
    """Per input coordinate mutual information between the signal chain and Y°.

    With a deterministic last activation ``-log p(Y°|X^(L-1), Φ)`` is the
    Gaussian noise entropy, so the information equals
    ``-F - n_L / (2 n)``, and ``-f - α_L / 2`` in the limit.

    Parameters
    ----------
    free_energy : float
        A finite ``n`` estimate of ``E F°`` or its limit.
    model : ModelSpec
    n : int, optional
        The input dimension of a finite ``n`` estimate. The limit is
        assumed when omitted.

    Returns
    -------
    float
    """
    if not model.activations[-1].is_deterministic:
        raise DomainError(
            "The free energy to information identity needs a deterministic last layer"
        )

    if n is None:
        ratio = model.alphas[-1]
    else:
        ratio = dims(model, n)[-1] / n

    return float(-free_energy - ratio / 2)
