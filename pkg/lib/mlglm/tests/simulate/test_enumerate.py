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


"""Exact enumeration of the partition function."""

import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from mlglm._imports import numpy as np
from mlglm._imports import scipy

from mlglm._model import sample_forward
from mlglm._simulate import MAX_STATES, exact_log_partition, gray_changes, to_gray_digits
from mlglm._utilities.errors import DomainError
from mlglm.model import ModelSpec

from ..model.test_spec import tanh_model_dict


def brute_force_log_partition(model, n, disorder):
    values = model.prior.values
    weights = model.prior.weights

    indices = np.array(list(itertools.product(range(len(values)), repeat=n)))
    signals = values[indices]
    log_prior = np.log(weights)[indices].sum(axis=1)

    for activation, matrix in zip(model.activations, disorder.matrices):
        signals = activation(signals @ matrix.T / np.sqrt(matrix.shape[1]))

    residual = disorder.Y[None, :] - np.sqrt(model.beta) * signals
    return scipy.special.logsumexp(log_prior - 0.5 * np.sum(residual**2, axis=1))


def test_four_states_by_hand():
    model = ModelSpec.from_dict(tanh_model_dict(alphas=(1.0,), beta=1.0))
    disorder = sample_forward(model, 2, rng_seed=3)
    phi = disorder.matrices[0] / np.sqrt(2)

    terms = []
    for x in ([-1, -1], [-1, 1], [1, -1], [1, 1]):
        residual = disorder.Y - np.tanh(phi @ np.array(x, dtype=float))
        terms.append(0.25 * np.exp(-0.5 * residual @ residual))

    assert exact_log_partition(model, 2, disorder) == pytest.approx(
        np.log(np.sum(terms)), rel=1e-12
    )


@pytest.mark.parametrize(
    "alphas, atoms, n",
    [
        ((1.0,), [[-1, 0.5], [1, 0.5]], 5),
        ((0.5, 1.5), [[-1, 0.5], [1, 0.5]], 6),
        # Large enough for the Gray code walk over leading coordinates
        ((1.0,), [[-1, 0.5], [1, 0.5]], 14),
        ((0.75,), [[-1, 0.25], [0, 0.5], [1, 0.25]], 9),
    ],
)
def test_matches_brute_force(alphas, atoms, n):
    data = tanh_model_dict(alphas=alphas, beta=1.5)
    data["prior"] = {"atoms": atoms}
    model = ModelSpec.from_dict(data)
    disorder = sample_forward(model, n, rng_seed=11, replication=2)

    expected = brute_force_log_partition(model, n, disorder)

    assert exact_log_partition(model, n, disorder) == pytest.approx(expected, rel=1e-10)
    assert exact_log_partition(model, n, disorder, threads=2) == pytest.approx(
        expected, rel=1e-10
    )


def test_pure_noise_is_analytic():
    model = ModelSpec.from_dict(tanh_model_dict(beta=0.0))
    disorder = sample_forward(model, 30, rng_seed=0)

    assert exact_log_partition(model, 30, disorder) == -0.5 * disorder.Z @ disorder.Z


@pytest.mark.parametrize("alphas", [(1.0,), (0.5, 1.5)])
def test_point_mass_prior_leaves_only_the_noise(alphas):
    data = tanh_model_dict(alphas=alphas, beta=2.0)
    data["prior"] = {"atoms": [[1, 1.0]]}
    model = ModelSpec.from_dict(data)
    disorder = sample_forward(model, 20, rng_seed=5)

    # The planted signal is the only state, so log Z° = −|Y° − √β X^(L)|² / 2
    assert exact_log_partition(model, 20, disorder) == pytest.approx(
        -0.5 * disorder.Z @ disorder.Z, rel=1e-9
    )


def test_enumeration_limits():
    model = ModelSpec.from_dict(tanh_model_dict(alphas=(1.0,)))
    n = int(np.log2(MAX_STATES)) + 1

    with pytest.raises(DomainError):
        exact_log_partition(model, n, None)

    data = tanh_model_dict(alphas=(1.0,))
    data["layers"][0]["activation"]["side_info"] = {"atoms": [[[1.0, 0.1], 1.0]]}
    noisy = ModelSpec.from_dict(data)

    with pytest.raises(DomainError):
        exact_log_partition(noisy, 4, sample_forward(noisy, 4, rng_seed=0))


def test_gray_digits():
    assert to_gray_digits(3, 2, 3) == [0, 1, 0]
    assert [to_gray_digits(index, 3, 1) for index in range(3)] == [[0], [1], [2]]


@given(st.integers(min_value=2, max_value=4), st.integers(min_value=1, max_value=4))
def test_gray_walk_changes_one_digit_by_one(base, n_digits):
    digits = [0] * n_digits
    visited = {tuple(digits)}

    for step, (position, old, new) in enumerate(gray_changes(base, n_digits), start=1):
        assert digits[position] == old
        assert abs(new - old) == 1

        digits[position] = new
        assert digits == to_gray_digits(step, base, n_digits)
        visited.add(tuple(digits))

    assert len(visited) == base**n_digits
