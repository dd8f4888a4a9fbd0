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


"""Prior and layer potentials against their closed form reductions."""

import pytest

from mlglm._imports import numpy as np

from mlglm._recursion import compute_rho
from mlglm._utilities.errors import DomainError, NumericalError
from mlglm.model import ActivationSpec, ModelSpec, PriorSpec, SideInformation
from mlglm.potentials import (
    PotentialRules,
    channel_density,
    potential_diagnostics,
    psi0,
    psi0_derivative,
    psi_layer,
    psi_partial,
    tabulate,
)
from mlglm.quadrature import gauss_expect

TANH = ActivationSpec(kind="scaled-tanh", kappa=1.0)


@pytest.mark.parametrize("r", [0.1, 1.0, 5.0])
def test_rademacher_prior_reduces_to_log_cosh(r):
    order = PotentialRules().prior

    def log_cosh(g):
        a = r + np.sqrt(r) * g
        return np.logaddexp(a, -a) - np.log(2)

    expected = -r / 2 + gauss_expect(log_cosh, order)

    assert psi0(r, PriorSpec.rademacher(), order) == pytest.approx(expected, abs=1e-9)


def test_prior_potential_shape():
    prior = PriorSpec.rademacher()

    assert psi0(0, prior) == 0.0
    assert psi0_derivative(0.0, prior) == pytest.approx(0, abs=1e-6)

    # Ψ₀(r) = r ρ₀ / 2 − I(r) with the information at most log 2
    assert psi0(5.0, prior) >= 5.0 / 2 - np.log(2)
    assert 0 <= psi0_derivative(2.0, prior) <= 0.5

    with pytest.raises(DomainError):
        psi0(-0.1, prior)


@pytest.mark.parametrize("h1", np.linspace(0, 1, 10))
def test_layer_potential_without_signal(h1):
    assert psi_layer(h1, 0.0, 1.0, TANH, PotentialRules.coarse()) == pytest.approx(
        -0.5, abs=1e-10
    )


def test_layer_potential_box():
    rules = PotentialRules.coarse()

    with pytest.raises(DomainError):
        psi_layer(1.5, 1.0, 1.0, TANH, rules)

    with pytest.raises(DomainError):
        psi_layer(0.5, -1.0, 1.0, TANH, rules)

    with pytest.raises(NumericalError):
        psi_layer(0.5, 2e4, 1.0, TANH, rules)

    # Rounding just past the corner of the box is absorbed
    assert psi_layer(1.0 + 1e-14, 1.0, 1.0, TANH, rules) == psi_layer(
        1.0, 1.0, 1.0, TANH, rules
    )


def test_layer_potential_is_monotone_in_h1():
    rules = PotentialRules.coarse()
    values = [psi_layer(h1, 2.0, 1.0, TANH, rules) for h1 in np.linspace(0, 1, 6)]

    assert np.all(np.diff(values) >= -1e-7)


def test_layer_partials():
    rules = PotentialRules.coarse()

    d1 = psi_partial("h1", (0.5, 1.0, 1.0), TANH, rules)
    d2 = psi_partial("h2", (0.5, 1.0, 1.0), TANH, rules)
    edge = psi_partial("h1", (1.0, 1.0, 1.0), TANH, rules)

    assert d1 >= 0
    assert edge >= 0
    assert d2 <= 0

    with pytest.raises(DomainError):
        psi_partial("h3", (0.5, 1.0, 1.0), TANH, rules)

    with pytest.raises(DomainError):
        psi_partial("h1", (0.5, 1.0, 1.0), TANH, rules, step=0)


def test_tabulated_shape_checks():
    model = ModelSpec.from_dict(
        {
            "layers": [{"alpha": 1.0, "activation": {"kind": "scaled-tanh"}}],
            "prior": {"atoms": [[-1, 0.5], [1, 0.5]]},
            "beta": 1.0,
        }
    )
    table = tabulate(
        model,
        compute_rho(model),
        h1_points=4,
        h2_max=2.0,
        h2_points=4,
        r_points=6,
    )
    report = potential_diagnostics(table)

    assert all(report["checks"].values()), report
    assert len(table.layer_frame()) == 16
    assert list(table.prior_frame().columns) == ["r", "psi0"]


def test_channel_density_is_an_unnormalised_gaussian():
    y = np.linspace(-2, 2, 9)

    assert np.allclose(channel_density(y, 0.3, 0.0, TANH), np.exp(-(y**2) / 2))
    assert np.allclose(
        channel_density(y, 0.3, 4.0, TANH), np.exp(-((y - 2 * np.tanh(0.3)) ** 2) / 2)
    )

    with pytest.raises(DomainError):
        channel_density(0.0, 0.0, -1.0, TANH)


@pytest.mark.parametrize("which", ["h1", "h2"])
def test_partials_are_second_order_in_the_step(which):
    rules = PotentialRules.coarse()
    estimates = [
        psi_partial(which, (0.5, 1.0, 1.0), TANH, rules, step=step)
        for step in (0.04, 0.02, 0.01)
    ]

    # Halving the step quarters the error of a central difference
    ratio = (estimates[0] - estimates[1]) / (estimates[1] - estimates[2])
    assert ratio == pytest.approx(4, rel=0.25)


@pytest.mark.slow
def test_layer_potential_is_nondecreasing_in_h1_across_the_box():
    rules = PotentialRules()
    partials = [
        psi_partial("h1", (h1, h2, 1.0), TANH, rules)
        for h1 in np.linspace(0, 1, 10)
        for h2 in np.linspace(0, 2, 10)
    ]

    assert min(partials) >= -1e-7


NOISY_TANH = ActivationSpec(
    kind="scaled-tanh",
    kappa=1.5,
    side_info=SideInformation(atoms=((1.0, 0.0), (0.5, 0.3)), weights=(0.5, 0.5)),
)


def full_overlap_potential(h2, rho, act, order):
    """E log Σ_a′ P(a′) exp(−(√h₂ (φ(√ρ V, A) − φ(√ρ V, a′)) + Z)² / 2)."""
    gains, shifts, weights = act.side_arrays()

    def integrand(v, z):
        total = 0.0
        for gain, shift, weight in zip(gains, shifts, weights):
            planted = act(np.sqrt(rho) * v, gain, shift)
            exponents = np.stack(
                [
                    -0.5 * (np.sqrt(h2) * (planted - act(np.sqrt(rho) * v, g, s)) + z) ** 2
                    + np.log(w)
                    for g, s, w in zip(gains, shifts, weights)
                ]
            )
            total = total + weight * np.logaddexp.reduce(exponents, axis=0)

        return total

    return gauss_expect(integrand, order, d=2)


@pytest.mark.parametrize("h2", [0.5, 2.0, 8.0])
@pytest.mark.parametrize("rho", [0.6, 1.0])
def test_full_overlap_reduces_to_a_planar_integral(h2, rho):
    rules = PotentialRules(outer=60, inner=24, prior=40)
    expected = full_overlap_potential(h2, rho, NOISY_TANH, rules.outer)

    assert psi_layer(rho, h2, rho, NOISY_TANH, rules) == pytest.approx(expected, abs=1e-10)
