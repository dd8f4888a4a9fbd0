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


"""Forward sampling of the layer chain."""

import pytest

from mlglm._imports import numpy as np

from mlglm._model import dims, empirical_rho, empirical_rho_layers, sample_forward
from mlglm._model.sampling import norm_variance_decay
from mlglm._recursion import compute_rho
from mlglm._utilities.errors import DomainError
from mlglm.model import ModelSpec

from .test_spec import tanh_model_dict


def test_dims_round_half_up():
    model = ModelSpec.from_dict(tanh_model_dict(alphas=(0.5, 1.25)))
    assert dims(model, 10) == [10, 5, 13]

    with pytest.raises(DomainError):
        dims(ModelSpec.from_dict(tanh_model_dict(alphas=(0.01,))), 10)


def test_sampling_is_reproducible():
    model = ModelSpec.from_dict(tanh_model_dict(alphas=(0.5, 1.5)))

    first = sample_forward(model, 20, rng_seed=7, replication=3)
    second = sample_forward(model, 20, rng_seed=7, replication=3)
    other = sample_forward(model, 20, rng_seed=7, replication=4)

    assert np.array_equal(first.Y, second.Y)
    assert not np.array_equal(first.Y, other.Y)

    assert first.matrices[0].shape == (10, 20)
    assert first.matrices[1].shape == (30, 10)
    assert np.allclose(first.Y, np.sqrt(model.beta) * first.signals[-1] + first.Z)


def test_pure_noise_observation():
    model = ModelSpec.from_dict(tanh_model_dict(beta=0.0))
    disorder = sample_forward(model, 8, rng_seed=0)

    assert np.array_equal(disorder.Y, disorder.Z)


def test_threads_do_not_change_results():
    model = ModelSpec.from_dict(tanh_model_dict())

    serial = empirical_rho_layers(model, 30, 10, rng_seed=1, threads=1)
    threaded = empirical_rho_layers(model, 30, 10, rng_seed=1, threads=3)

    assert np.array_equal(serial[0], threaded[0])
    assert np.array_equal(serial[1], threaded[1])


def test_empirical_rho_approaches_recursion():
    model = ModelSpec.from_dict(tanh_model_dict())
    rho = compute_rho(model)

    mean, variance = empirical_rho(model, 200, 50, rng_seed=0)
    stderr = np.sqrt(variance / 50)

    assert abs(mean - rho[2]) < 4 * stderr + 0.02


@pytest.mark.slow
def test_norm_variance_decays():
    model = ModelSpec.from_dict(tanh_model_dict())
    report = norm_variance_decay(model, 200, 400, 2000, rng_seed=0)

    assert report["passed"]
