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

"""Tabulated potentials and their shape checks.

``Ψ₀`` is nondecreasing and convex with slope in ``[0, ρ₀ / 2]``.
``Ψ_l`` is nondecreasing and convex in ``h₁``. Along ``h₂`` it is
convex but decreasing, ``Ψ_l(h₁, 0) = -1/2`` being its maximum; the
compensated potential ``Ψ_l + ρ_l h₂ / 2`` is the nondecreasing one,
with slope in ``[0, ρ_l / 2]`` where ``ρ_l = E φ_l(√ρ G)²``.
"""

import logging
from dataclasses import dataclass

from mlglm._imports import numpy as np
from mlglm._imports import pandas as pd

from mlglm._recursion import layer_second_moment

from .core import PotentialRules, psi0, psi_layer

MONOTONE_TOLERANCE = 1e-7
CONVEX_TOLERANCE = 1e-6


@dataclass
class PotentialTable:
    layer: int
    rho_in: float
    rho_out: float
    rho_prior: float
    h1: "np.ndarray"
    h2: "np.ndarray"
    values: "np.ndarray"
    r: "np.ndarray"
    psi0_values: "np.ndarray"

    def layer_frame(self):
        h1, h2 = np.meshgrid(self.h1, self.h2, indexing="ij")
        return pd.DataFrame(
            {
                "layer": self.layer,
                "h1": h1.ravel(),
                "h2": h2.ravel(),
                "psi": self.values.ravel(),
                "psi_compensated": (self.values + self.rho_out * h2 / 2).ravel(),
            }
        )

    def prior_frame(self):
        return pd.DataFrame({"r": self.r, "psi0": self.psi0_values})


def tabulate_potentials(
    model,
    rho,
    layer=1,
    h1_points=10,
    h2_max=4.0,
    h2_points=10,
    r_max=5.0,
    r_points=21,
    rules=None,
):
    """Evaluate ``Ψ_layer`` on an ``h₁ × h₂`` grid and ``Ψ₀`` on an ``r`` grid."""
    if rules is None:
        rules = PotentialRules()

    activation = model.activations[layer - 1]
    rho_in = rho[layer - 1]
    rho_out = layer_second_moment(activation, rho_in)

    h1 = np.linspace(0, rho_in, h1_points)
    h2 = np.linspace(0, h2_max, h2_points)
    r = np.linspace(0, r_max, r_points)

    logging.info(
        "Tabulating layer %s potential on a %sx%s grid", layer, h1_points, h2_points
    )
    values = np.array(
        [[psi_layer(a, b, rho_in, activation, rules) for b in h2] for a in h1]
    )
    psi0_values = np.array([psi0(value, model.prior, rules.prior) for value in r])

    return PotentialTable(
        layer=layer,
        rho_in=rho_in,
        rho_out=rho_out,
        rho_prior=rho[0],
        h1=h1,
        h2=h2,
        values=values,
        r=r,
        psi0_values=psi0_values,
    )


def potential_diagnostics(table):
    """Monotonicity, slope range and convexity checks on a table.

    Returns
    -------
    report : dict
        Minima of the relevant discrete differences together with a
        pass flag per property.
    """
    values = table.values
    compensated = values + table.rho_out * table.h2[None, :] / 2

    d1 = np.diff(values, axis=0) / np.diff(table.h1)[:, None]
    d2 = np.diff(compensated, axis=1) / np.diff(table.h2)[None, :]
    d_prior = np.diff(table.psi0_values) / np.diff(table.r)

    second_h1 = np.diff(values, n=2, axis=0)
    second_h2 = np.diff(values, n=2, axis=1)
    second_prior = np.diff(table.psi0_values, n=2)

    report = {
        "h1_slope_min": float(d1.min()),
        "compensated_h2_slope_min": float(d2.min()),
        "compensated_h2_slope_max": float(d2.max()),
        "prior_slope_min": float(d_prior.min()),
        "prior_slope_max": float(d_prior.max()),
        "h1_second_difference_min": float(second_h1.min()),
        "h2_second_difference_min": float(second_h2.min()),
        "prior_second_difference_min": float(second_prior.min()),
        "h2_zero_max_deviation": float(np.max(np.abs(values[:, 0] + 0.5))),
    }

    checks = {
        "h1_nondecreasing": report["h1_slope_min"] >= -MONOTONE_TOLERANCE,
        "compensated_h2_range": (
            report["compensated_h2_slope_min"] >= -MONOTONE_TOLERANCE
            and report["compensated_h2_slope_max"]
            <= table.rho_out / 2 + MONOTONE_TOLERANCE
        ),
        "prior_slope_range": (
            report["prior_slope_min"] >= -MONOTONE_TOLERANCE
            and report["prior_slope_max"] <= table.rho_prior / 2 + MONOTONE_TOLERANCE
        ),
        "h1_convex": report["h1_second_difference_min"] >= -CONVEX_TOLERANCE,
        "h2_convex": report["h2_second_difference_min"] >= -CONVEX_TOLERANCE,
        "prior_convex": report["prior_second_difference_min"] >= -CONVEX_TOLERANCE,
        "h2_zero_reduction": report["h2_zero_max_deviation"] <= 1e-10,
    }
    report["checks"] = checks

    failed = sorted(name for name, passed in checks.items() if not passed)
    if failed:
        logging.warning("Potential shape checks failed: %s", ", ".join(failed))

    return report
