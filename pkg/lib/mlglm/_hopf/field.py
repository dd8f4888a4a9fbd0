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


"""Hopf fields on a grid of ``Ω_ρ`` and their weak solution diagnostics.

The grid is uniform in ``(t, s, h₂)`` with ``s = h₁ / (1 − t)``, so the
slanted face ``h₁ = ρ(1 − t)`` is the fixed face ``s = ρ``.
"""

import concurrent.futures
import logging
from dataclasses import dataclass, field
from typing import Dict

from mlglm._imports import numpy as np
from mlglm._imports import pandas as pd
from mlglm._imports import tqdm

from mlglm._utilities.errors import DomainError, NumericalError

from .formula import DEFAULT_INNER_GRID, hopf_values
from .initial import H2_MAX_FACTOR, default_truncations

DEFAULT_T_MAX = 0.75
BOUNDARY_BAND = 2
CONVEXITY_STEPS = (1, 2, 4)
RESOLUTION_DIVISOR = 64

DEFAULT_TOLERANCES = {
    "monotone": 1e-8,
    "derivative": 1e-8,
    "partial_convexity": 1e-8,
    "residual_p95": 1e-2,
}


@dataclass
class HopfField:
    t: "np.ndarray"
    s: "np.ndarray"
    h2: "np.ndarray"
    values: "np.ndarray"
    z1: "np.ndarray"
    z2: "np.ndarray"
    alpha: float
    rho: float

    def __post_init__(self):
        if not np.all(np.isfinite(self.values)):
            raise NumericalError("Hopf field values must be finite on the whole grid")

    @property
    def shape(self):
        return self.values.shape

    @property
    def h1(self):
        """``h₁`` per ``(t, s)`` grid node."""
        return self.s[None, :] * (1 - self.t[:, None])

    def to_frame(self, residual=None):
        t, s, h2 = np.meshgrid(self.t, self.s, self.h2, indexing="ij")
        if residual is None:
            residual = np.full(self.shape, np.nan)

        return pd.DataFrame(
            {
                "t": t.ravel(),
                "h1": (s * (1 - t)).ravel(),
                "h2": h2.ravel(),
                "f": self.values.ravel(),
                "residual": residual.ravel(),
            }
        )


def build_field(
    data,
    t_points=33,
    s_points=33,
    h2_points=33,
    t_max=DEFAULT_T_MAX,
    h2_max=None,
    r_cap=None,
    y_max=None,
    inner_grid=DEFAULT_INNER_GRID,
    threads=1,
    chunk_size=4096,
    progress=False,
):
    """Evaluate the Hopf formula on a ``(t, s, h₂)`` grid.

    Parameters
    ----------
    data : SeparableInitialData
    t_points, s_points, h2_points : int, optional
    t_max : float, optional
        Largest time of the grid, below 1 so that the ``s`` coordinate
        stays well conditioned.
    h2_max : float, optional
        Defaults to ``4 α ρ``.
    threads : int, optional
        Chunks of grid points are evaluated concurrently.

    Returns
    -------
    HopfField
    """
    if not 0 < t_max < 1:
        raise DomainError(f"t_max must lie within (0, 1), got {t_max!r}")

    if min(t_points, s_points, h2_points) < 3:
        raise DomainError("Every grid axis needs at least 3 points")

    if h2_max is None:
        h2_max = H2_MAX_FACTOR * data.alpha * data.rho

    default_r_cap, default_y_max = default_truncations(data.psi1, data.alpha, h2_max)
    r_cap = default_r_cap if r_cap is None else r_cap
    y_max = max(default_y_max, data.psi2.end) if y_max is None else y_max

    t = np.linspace(0.0, t_max, t_points)
    s = np.linspace(0.0, data.rho, s_points)
    h2 = np.linspace(0.0, h2_max, h2_points)

    tt, ss, hh = np.meshgrid(t, s, h2, indexing="ij")
    points = (tt.ravel(), (ss * (1 - tt)).ravel(), hh.ravel())
    total = len(points[0])

    starts = list(range(0, total, chunk_size))

    def _chunk(start):
        stop = start + chunk_size
        return hopf_values(
            *(value[start:stop] for value in points),
            data,
            r_cap=r_cap,
            y_max=y_max,
            inner_grid=inner_grid,
        )

    logging.info(
        "Evaluating the Hopf formula on a %sx%sx%s grid", t_points, s_points, h2_points
    )

    if threads > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=threads) as executor:
            solutions = list(
                tqdm.tqdm(executor.map(_chunk, starts), total=len(starts), disable=not progress)
            )
    else:
        solutions = [_chunk(start) for start in tqdm.tqdm(starts, disable=not progress)]

    shape = tt.shape

    def _gather(name):
        return np.concatenate([getattr(solution, name) for solution in solutions]).reshape(
            shape
        )

    return HopfField(
        t=t,
        s=s,
        h2=h2,
        values=_gather("values"),
        z1=_gather("z1"),
        z2=_gather("z2"),
        alpha=data.alpha,
        rho=data.rho,
    )


@dataclass
class WeakSolutionReport:
    metrics: Dict[str, float]
    checks: Dict[str, bool]
    residual: "np.ndarray" = field(repr=False)
    resolution_ok: bool = True

    @property
    def passed(self):
        return all(self.checks.values())

    def to_dict(self):
        return {
            "metrics": self.metrics,
            "checks": self.checks,
            "passed": self.passed,
            "resolution_ok": self.resolution_ok,
        }


def _central(values, spacing, axis):
    return (np.roll(values, -1, axis=axis) - np.roll(values, 1, axis=axis)) / (2 * spacing)


def verify_weak_solution(hopf_field, tolerances=None):
    """Numerical checks of the weak solution conditions on a field.

    Derivatives along ``h₁`` and ``t`` follow from the chain rule on the
    ``(t, s, h₂)`` grid, ``∂₁f = ∂_s g / (1 − t)`` and
    ``∂_t f = ∂_t g + s ∂₁f``.

    Parameters
    ----------
    hopf_field : HopfField
    tolerances : dict, optional
        Overrides of ``DEFAULT_TOLERANCES``.

    Returns
    -------
    WeakSolutionReport
        Always produced; failing conditions are flagged in ``checks``.
    """
    tolerances = {**DEFAULT_TOLERANCES, **(tolerances or {})}

    g = hopf_field.values
    t, s, h2 = hopf_field.t, hopf_field.s, hopf_field.h2
    dt, ds, dh = t[1] - t[0], s[1] - s[0], h2[1] - h2[0]
    stretch = (1 - t)[:, None, None]

    finest = hopf_field.rho / RESOLUTION_DIVISOR
    resolution_ok = bool(ds <= finest and dh <= finest)
    if not resolution_ok:
        logging.warning(
            "Hopf grid spacing exceeds rho / %s, diagnostics are indicative only",
            RESOLUTION_DIVISOR,
        )

    # Hamilton-Jacobi residual by central differences
    d1 = _central(g, ds, axis=1) / stretch
    d2 = _central(g, dh, axis=2)
    dtime = _central(g, dt, axis=0) + s[None, :, None] * d1
    residual_full = dtime - 2 / hopf_field.alpha * d1 * d2

    interior = np.zeros(g.shape, dtype=bool)
    interior[1:-1, 1 : -(BOUNDARY_BAND + 1), 1:-1] = True
    residual = np.where(interior, residual_full, np.nan)
    magnitudes = np.abs(residual[interior])

    # Forward differences over the whole grid
    forward1 = np.diff(g, axis=1) / ds / stretch
    forward2 = np.diff(g, axis=2) / dh
    forward_t = np.diff(g, axis=0) / dt

    convexity = {}
    for step in CONVEXITY_STEPS:
        if step >= min(g.shape[1], g.shape[2]):
            continue
        increment = (
            g[:, step:, step:] + g[:, :-step, :-step] - g[:, step:, :-step] - g[:, :-step, step:]
        )
        convexity[step] = float(np.min(increment))

    metrics = {
        "hj_residual_max": float(np.max(magnitudes)) if magnitudes.size else 0.0,
        "hj_residual_p95": float(np.percentile(magnitudes, 95)) if magnitudes.size else 0.0,
        "d1_min": float(np.min(forward1)),
        "d1_max": float(np.max(forward1)),
        "d2_min": float(np.min(forward2)),
        "d2_max": float(np.max(forward2)),
        "h1_line_increment_min": float(np.min(np.diff(g, axis=1))),
        "h2_line_increment_min": float(np.min(np.diff(g, axis=2))),
        "lipschitz_estimate": float(
            max(np.max(np.abs(forward1)), np.max(np.abs(forward2)), np.max(np.abs(forward_t)))
        ),
        "partial_convexity_min": min(convexity.values()) if convexity else 0.0,
        "partial_convexity_by_step": {str(step): value for step, value in convexity.items()},
        "grid_spacing": {"t": float(dt), "h1": float(ds), "h2": float(dh)},
    }

    z2_max = hopf_field.alpha * hopf_field.rho / 2
    checks = {
        "monotone_h1": metrics["h1_line_increment_min"] >= -tolerances["monotone"],
        "monotone_h2": metrics["h2_line_increment_min"] >= -tolerances["monotone"],
        "d1_nonnegative": metrics["d1_min"] >= -tolerances["derivative"],
        "d2_range": (
            metrics["d2_min"] >= -tolerances["derivative"]
            and metrics["d2_max"] <= z2_max + tolerances["derivative"]
        ),
        "partial_convexity": metrics["partial_convexity_min"]
        >= -tolerances["partial_convexity"],
        "hj_residual": metrics["hj_residual_p95"] <= tolerances["residual_p95"],
    }

    failed = sorted(name for name, passed in checks.items() if not passed)
    if failed:
        logging.warning("Weak solution checks failed: %s", ", ".join(failed))

    return WeakSolutionReport(
        metrics=metrics, checks=checks, residual=residual, resolution_ok=resolution_ok
    )
