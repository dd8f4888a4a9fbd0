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


"""Limiting second moments of the layer signals."""

import pytest

from mlglm._imports import numpy as np

from mlglm._recursion import compute_rho, layer_second_moment
from mlglm._utilities.errors import NumericalError
from mlglm.model import ActivationSpec, ModelSpec, PriorSpec
from mlglm.quadrature import gauss_expect

from ..model.test_spec import tanh_model_dict


def test_rademacher_tanh_recursion():
    model = ModelSpec.from_dict(tanh_model_dict(alphas=(0.5, 2.0)))
    rho = compute_rho(model)

    first = gauss_expect(lambda g: np.tanh(g) ** 2, 200)
    second = gauss_expect(lambda g: np.tanh(np.sqrt(first) * g) ** 2, 200)

    assert rho[0] == 1.0
    assert rho.to_list() == pytest.approx([1.0, first, second], rel=1e-12)


def test_side_information_mixes_over_atoms():
    activation = ActivationSpec.from_dict(
        {
            "kind": "scaled-sine",
            "kappa": 2.0,
            "side_info": {"atoms": [[[1.0, 0.0], 0.5], [[2.0, 0.5], 0.5]]},
        }
    )

    expected = 0.5 * gauss_expect(lambda g: np.sin(2 * g) ** 2, 200) + 0.5 * gauss_expect(
        lambda g: (2 * np.sin(2 * g + 0.5)) ** 2, 200
    )

    assert layer_second_moment(activation, 1.0) == pytest.approx(expected, rel=1e-12)


def test_second_moment_is_bounded_by_the_activation():
    activation = ActivationSpec(kind="scaled-erf", kappa=3.0)

    for rho_in in (0.1, 1.0, 10.0):
        assert 0 < layer_second_moment(activation, rho_in) <= activation.bound**2


def test_vanishing_second_moment_is_inadmissible():
    model = ModelSpec.from_dict(tanh_model_dict(alphas=(1.0,)))
    tiny = ModelSpec(
        layers=model.layers, prior=PriorSpec(atoms=((1e-9, 1.0),)), beta=1.0
    )

    with pytest.raises(NumericalError):
        compute_rho(tiny)
