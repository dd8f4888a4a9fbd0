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
from typing import Tuple

from mlglm._imports import numpy as np
from mlglm._imports import pandas as pd
from mlglm._imports import tqdm

from mlglm._model import sample_forward
from mlglm._utilities.errors import DomainError

from .enumerate import exact_log_partition

FINITE_SIZE_SLACK = 0.05
COMPARISON_SIGMAS = 3.0
MONOTONE_SIGMAS = 4.0


@dataclass(frozen=True)
class FreeEnergyEstimate:
    """Monte Carlo estimate of ``E F°`` over independent disorder draws.

    Replication ``r`` uses the random streams ``(seed, r)``, so the first
    ``R`` values of a run with more replications reproduce a run with
    ``R`` replications.
    """

    n: int
    replications: int
    mean: float
    stderr: float
    values: Tuple[float, ...]
    seed: int

    def __post_init__(self):
        if self.replications < 2:
            raise DomainError("At least two replications are required")

        if len(self.values) != self.replications:
            raise DomainError("One value per replication is required")

    @classmethod
    def from_values(cls, n, values, seed):
        values = np.asarray(values, dtype=float)
        replications = len(values)

        if replications < 2:
            raise DomainError("At least two replications are required")

        return cls(
            n=n,
            replications=replications,
            mean=float(np.mean(values)),
            stderr=float(np.std(values, ddof=1) / np.sqrt(replications)),
            values=tuple(float(value) for value in values),
            seed=seed,
        )

    def to_frame(self):
        return pd.DataFrame(
            {
                "rep": np.arange(self.replications),
                "F": self.values,
                "seed": self.seed,
            }
        )

    def to_dict(self):
        return {
            "n": self.n,
            "replications": self.replications,
            "mean": self.mean,
            "stderr": self.stderr,
            "seed": self.seed,
        }


def replication_free_energy(model, n, rng_seed, replication, threads=1):
    """``F° = log Z° / n`` of a single disorder draw."""
    disorder = sample_forward(model, n, rng_seed, replication)
    return exact_log_partition(model, n, disorder, threads=threads) / n


def estimate_free_energy(model, n, replications, rng_seed, threads=1, progress=False):
    """Mean and standard error of ``F°`` over independent disorder draws.

    Parameters
    ----------
    model : ModelSpec
    n : int
    replications : int
        At least two.
    rng_seed : int
    threads : int, optional
        Replications are evaluated concurrently; results keep their
        replication order.
    progress : bool, optional
        Display a progress bar.

    Returns
    -------
    FreeEnergyEstimate
    """
    if replications < 2:
        raise DomainError("At least two replications are required")

    logging.info(
        "Estimating the free energy at n=%s over %s replications", n, replications
    )

    def _replication(replication):
        return replication_free_energy(model, n, rng_seed, replication)

    if threads > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=threads) as executor:
            values = list(
                tqdm.tqdm(
                    executor.map(_replication, range(replications)),
                    total=replications,
                    disable=not progress,
                )
            )
    else:
        values = [
            _replication(replication)
            for replication in tqdm.tqdm(range(replications), disable=not progress)
        ]

    estimate = FreeEnergyEstimate.from_values(n, values, rng_seed)
    logging.info("E F = %.6f +/- %.6f", estimate.mean, estimate.stderr)

    return estimate


def compare_with_limit(estimate, limit, slack=FINITE_SIZE_SLACK):
    """Whether a finite ``n`` estimate is within ``3 stderr + slack`` of a limit.

    ``slack`` absorbs the finite size corrections, for which no rate is
    known.
    """
    difference = estimate.mean - limit
    tolerance = COMPARISON_SIGMAS * estimate.stderr + slack
    passed = abs(difference) <= tolerance

    if not passed:
        logging.warning(
            "Finite n estimate %.6f differs from the limit %.6f by %.3e (tolerance %.3e)",
            estimate.mean,
            limit,
            difference,
            tolerance,
        )

    return {
        "estimate": estimate.mean,
        "limit": float(limit),
        "difference": float(difference),
        "stderr": estimate.stderr,
        "slack": slack,
        "tolerance": float(tolerance),
        "passed": bool(passed),
    }


def _observation_energy(model, n, rng_seed, replication):
    observation = sample_forward(model, n, rng_seed, replication).observation
    return float(observation @ observation / (2 * n))


def _compensated(estimate, model):
    shifts = [
        _observation_energy(model, estimate.n, estimate.seed, replication)
        for replication in range(estimate.replications)
    ]
    return FreeEnergyEstimate.from_values(
        estimate.n, np.asarray(estimate.values) + shifts, estimate.seed
    )


def monotone_information_check(model, n, replications, rng_seed, threads=1):
    """Compare the mean compensated free energy at ``β = 1`` and ``β = 0``.

    With the unnormalised Gaussian channel ``F°`` itself falls as the
    signal to noise ratio grows. Adding back ``|Y°|² / (2 n)`` gives the
    free energy of the Hamiltonian ``√β x·Y° − β |x|² / 2``, which is
    expected not to decrease with ``β``. A violation beyond four
    combined standard errors is flagged and logged rather than raised.

    Returns
    -------
    report : dict
    """
    informative = _compensated(
        estimate_free_energy(model.with_beta(1.0), n, replications, rng_seed, threads),
        model.with_beta(1.0),
    )
    pure_noise = _compensated(
        estimate_free_energy(model.with_beta(0.0), n, replications, rng_seed, threads),
        model.with_beta(0.0),
    )

    combined = float(np.hypot(informative.stderr, pure_noise.stderr))
    passed = informative.mean >= pure_noise.mean - MONOTONE_SIGMAS * combined

    if not passed:
        logging.warning(
            "Mean compensated free energy at beta=1 (%.6f) falls below beta=0 (%.6f)",
            informative.mean,
            pure_noise.mean,
        )

    return {
        "beta_1": informative.to_dict(),
        "beta_0": pure_noise.to_dict(),
        "combined_stderr": combined,
        "passed": bool(passed),
    }
