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


"""Monte Carlo estimates of the expected free energy."""

import pytest

from mlglm._imports import numpy as np

from mlglm._recursion import compute_rho
from mlglm._saddle import solve_grid
from mlglm._utilities.errors import DomainError
from mlglm.model import ModelSpec
from mlglm.simulate import (
    FreeEnergyEstimate,
    compare_with_limit,
    estimate_free_energy,
    monotone_information_check,
)

from ..model.test_spec import tanh_model_dict


def test_pure_noise_estimate():
    model = ModelSpec.from_dict(tanh_model_dict(alphas=(1.0,), beta=0.0))
    estimate = estimate_free_energy(model, 64, 100, rng_seed=0)

    assert abs(estimate.mean - (-64 / (2 * 64))) <= 4 * estimate.stderr


def test_replications_are_reproducible():
    model = ModelSpec.from_dict(tanh_model_dict(alphas=(1.0,)))

    short = estimate_free_energy(model, 6, 4, rng_seed=5)
    threaded = estimate_free_energy(model, 6, 6, rng_seed=5, threads=3)

    assert threaded.values[:4] == short.values
    assert estimate_free_energy(model, 6, 4, rng_seed=5).mean == short.mean

    frame = threaded.to_frame()
    assert list(frame.columns) == ["rep", "F", "seed"]
    assert list(frame["rep"]) == list(range(6))


def test_standard_error():
    estimate = FreeEnergyEstimate.from_values(4, [1.0, 2.0, 3.0, 4.0], seed=0)

    assert estimate.mean == 2.5
    assert estimate.stderr == pytest.approx(np.std([1, 2, 3, 4], ddof=1) / 2)

    with pytest.raises(DomainError):
        FreeEnergyEstimate.from_values(4, [1.0], seed=0)


def test_comparison_tolerance():
    estimate = FreeEnergyEstimate.from_values(4, [1.0, 1.1, 0.9, 1.0], seed=0)

    assert compare_with_limit(estimate, 1.04)["passed"]
    assert not compare_with_limit(estimate, 1.5)["passed"]

    report = compare_with_limit(estimate, 1.0, slack=0.0)
    assert report["tolerance"] == pytest.approx(3 * estimate.stderr)


def test_information_does_not_decrease_with_signal():
    model = ModelSpec.from_dict(tanh_model_dict(alphas=(1.0,)))
    report = monotone_information_check(model, 6, 20, rng_seed=2)

    assert report["passed"]
    assert report["beta_0"]["mean"] == pytest.approx(0, abs=1e-12)


@pytest.mark.slow
def test_finite_size_estimates_approach_the_limit():
    model = ModelSpec.from_dict(tanh_model_dict(alphas=(1.0,), beta=1.0))
    limit = solve_grid(model, compute_rho(model)).value

    gaps = []
    for n in (8, 12, 16):
        estimate = estimate_free_energy(model, n, 200, rng_seed=0)
        report = compare_with_limit(estimate, limit)
        gaps.append(abs(report["difference"]))

    assert report["passed"], (report, gaps)
