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
import math

from mlglm._imports import numpy as np

from mlglm._model import RhoSequence
from mlglm._quadrature import rule
from mlglm._utilities.errors import NumericalError

DEFAULT_ORDER = 200
RHO_FLOOR = 1e-14


def layer_second_moment(act, rho_in, order_or_rule=DEFAULT_ORDER):
    """``E φ(√ρ_in G, A)²`` for a standard normal ``G``."""
    gh_rule = rule(order_or_rule)
    gains, shifts, weights = act.side_arrays()

    values = act(math.sqrt(rho_in) * gh_rule.nodes[:, None], gains, shifts) ** 2

    return float(gh_rule.expect(values.T) @ weights)


def compute_rho(model, order_or_rule=DEFAULT_ORDER):
    """Limiting second moments of the layer signals.

    ``ρ₀ = E X₁²`` and ``ρ_l = E φ_l(√ρ_{l-1} G, A)²``.

    Parameters
    ----------
    model : ModelSpec
    order_or_rule : int or GaussHermiteRule, optional
        Defaults to a 200 point rule.

    Returns
    -------
    RhoSequence
    """
    values = [model.prior.second_moment]

    for layer_index, activation in enumerate(model.activations, start=1):
        rho = layer_second_moment(activation, values[-1], order_or_rule)

        if not rho > RHO_FLOOR:
            raise NumericalError(
                f"rho_{layer_index} = {rho!r} is not above {RHO_FLOOR:g}, "
                "the model is inadmissible"
            )

        values.append(rho)

    logging.debug("Limiting second moments: %s", values)

    return RhoSequence(values=tuple(values))
