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


import concurrent.futures
import logging
from dataclasses import dataclass

from mlglm._imports import numpy as np

from mlglm._potentials import DEFAULT_STEP, PotentialRules
from mlglm._utilities.errors import DomainError, NonConvergenceError

from .objective import (
    SaddlePointResult,
    SaddleVariables,
    box_bounds,
    check_caps,
    default_caps,
    phi_objective,
    project,
    stationarity_map,
)

DISAGREEMENT_TOLERANCE = 1e-5
CAP_TOLERANCE = 1e-6
HEURISTIC_DEPTH = 3


@dataclass
class _RestartOutcome:
    restart: int
    variables: SaddleVariables
    residual: float
    iterations: int
    converged: bool


def _restart_start(restart, rng_seed, lower, upper):
    rng = np.random.default_rng(np.random.SeedSequence(rng_seed, spawn_key=(restart,)))
    return lower + (upper - lower) * rng.random(lower.shape)


def _iterate(start, model, rho, rules, step, caps, damping, tol, max_iter, restart):
    current = project(start, model, rho, caps)
    residual = np.inf

    for iteration in range(1, max_iter + 1):
        variables = SaddleVariables.from_array(current)
        target = project(
            stationarity_map(variables, model, rho, rules, step), model, rho, caps
        )
        residual = float(np.max(np.abs(target - current)))

        if iteration % 50 == 0:
            logging.debug(
                "Restart %s iteration %s residual %.3e", restart, iteration, residual
            )

        if residual < tol:
            return _RestartOutcome(restart, variables, residual, iteration, True)

        current = (1 - damping) * current + damping * target

    return _RestartOutcome(
        restart, SaddleVariables.from_array(current), residual, max_iter, False
    )


def solve_fixed_point(
    model,
    rho,
    damping=0.5,
    tol=1e-7,
    max_iter=1000,
    n_restarts=8,
    rng_seed=0,
    rules=None,
    step=DEFAULT_STEP,
    caps=None,
    initial=None,
    threads=1,
):
    """Damped projected iteration of the first order conditions.

    The update of every restart is ``v ← (1 − d) v + d Π(T(v))`` where
    ``T`` is ``stationarity_map`` and ``Π`` the projection onto the
    boxes. Starting points are drawn uniformly within the boxes, with
    ``initial`` (when given) replacing the first of them.

    Parameters
    ----------
    model : ModelSpec
    rho : RhoSequence
    damping : float, optional
        Within ``(0, 1]``.
    tol : float, optional
        Stopping threshold on the largest component of ``|Π(T(v)) − v|``.
    max_iter : int, optional
    n_restarts : int, optional
    rng_seed : int, optional
    rules : PotentialRules, optional
    step : float, optional
        Relative finite difference step of the potential derivatives.
    caps : (float, float), optional
    initial : SaddleVariables, optional
    threads : int, optional

    Returns
    -------
    SaddlePointResult
        The converged restart with the largest objective value.

    Raises
    ------
    NonConvergenceError
        When no restart converges.
    TruncationError
        When the chosen optimum reaches ``R_CAP`` or ``Y_MAX``.
    """
    if not 0 < damping <= 1:
        raise DomainError(f"damping must lie within (0, 1], got {damping!r}")

    if n_restarts < 1:
        raise DomainError("At least one restart is required")

    if rules is None:
        rules = PotentialRules()

    if caps is None:
        caps = default_caps(model, rho)

    lower, upper = box_bounds(model, rho, caps)
    starts = [_restart_start(restart, rng_seed, lower, upper) for restart in range(n_restarts)]
    if initial is not None:
        starts[0] = initial.as_array()

    logging.info(
        "Fixed point saddle search: L=%s beta=%s restarts=%s damping=%s",
        model.L,
        model.beta,
        n_restarts,
        damping,
    )

    def _run(restart):
        return _iterate(
            starts[restart], model, rho, rules, step, caps, damping, tol, max_iter, restart
        )

    if threads > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=threads) as executor:
            outcomes = list(executor.map(_run, range(n_restarts)))
    else:
        outcomes = [_run(restart) for restart in range(n_restarts)]

    converged = [outcome for outcome in outcomes if outcome.converged]
    if not converged:
        best_residual = min(outcome.residual for outcome in outcomes)
        raise NonConvergenceError(
            f"None of the {n_restarts} restarts converged within {max_iter} iterations",
            best_residual=best_residual,
        )

    values = [phi_objective(outcome.variables, model, rho, rules, caps) for outcome in converged]
    best = int(np.argmax(values))
    chosen = converged[best]

    # Iterates only approach a cap up to the stopping threshold
    check_caps(chosen.variables, caps, atol=max(10 * tol, CAP_TOLERANCE * max(caps)))

    spread = float(max(values) - min(values))
    diagnostics = {
        "restarts": n_restarts,
        "converged_restarts": len(converged),
        "restart_values": values,
        "restart_iterations": [outcome.iterations for outcome in outcomes],
        "restart_residuals": [outcome.residual for outcome in outcomes],
        "restart_spread": spread,
        "restart_disagreement": spread > DISAGREEMENT_TOLERANCE,
        "heuristic": model.L >= HEURISTIC_DEPTH,
        "damping": damping,
        "tol": tol,
    }

    if diagnostics["restart_disagreement"]:
        logging.warning(
            "Converged restarts disagree by %.3e in value, reporting the largest", spread
        )

    if diagnostics["heuristic"]:
        logging.warning(
            "Fixed point solutions for L=%s are not guaranteed to be global", model.L
        )

    return SaddlePointResult(
        variables=chosen.variables,
        value=values[best],
        method="fixed-point",
        residual=chosen.residual,
        iterations=chosen.iterations,
        diagnostics=diagnostics,
    )
