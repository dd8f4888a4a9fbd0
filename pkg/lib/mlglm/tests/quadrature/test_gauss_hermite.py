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


"""Gauss-Hermite expectations against closed form Gaussian moments."""

import math

import pytest

from mlglm._imports import numpy as np

from mlglm._utilities.errors import DomainError, NumericalError
from mlglm.quadrature import gauss_expect, rule


@pytest.mark.parametrize("order", [2, 10, 80, 512])
def test_weights_form_a_probability(order):
    gh_rule = rule(order)

    assert gh_rule.weights.sum() == pytest.approx(1, abs=1e-14)
    assert np.all(gh_rule.weights > 0)
    assert gh_rule.expect(gh_rule.nodes) == pytest.approx(0, abs=1e-13)


def test_even_moments_are_exact():
    gh_rule = rule(10)

    # Exact up to polynomial degree 2 * order - 1
    for power in range(0, 19, 2):
        double_factorial = math.prod(range(power - 1, 0, -2)) if power else 1
        assert gauss_expect(lambda g, p=power: g**p, gh_rule) == pytest.approx(
            double_factorial, rel=1e-10
        )


def test_lognormal_mean():
    assert gauss_expect(np.exp, 60) == pytest.approx(np.exp(0.5), rel=1e-12)


def test_tensor_products():
    assert gauss_expect(lambda a, b: (a * b) ** 2, 20, d=2) == pytest.approx(1)
    assert gauss_expect(lambda a, b, c: a**2 + b**2 + c**2, 8, d=3) == pytest.approx(3)


def test_scalar_only_callables_are_vectorised():
    def clipped(g):
        return float(min(max(g, -1.0), 1.0)) ** 2

    value = gauss_expect(clipped, 200)
    assert 0 < value < 1


def test_invalid_orders():
    for order in (1, 513, 2.5):
        with pytest.raises(DomainError):
            rule(order)

    with pytest.raises(DomainError):
        gauss_expect(np.exp, 10, d=4)


def test_non_finite_integrand():
    with pytest.raises(NumericalError):
        gauss_expect(lambda g: np.exp(g**2 * 1000), 100)
