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


"""Forward sampling of the layer chain at finite ``n``.

Random streams are split per (replication, component) with
``numpy.random.SeedSequence`` spawn keys. Component 0 draws the signal,
component ``l`` draws the mixing matrix and side information of layer
``l`` and component ``L + 1`` draws the observation noise. Replications
can therefore run in any order, or in parallel, with identical output.
"""

import concurrent.futures
import logging
import math
from dataclasses import dataclass
from typing import Tuple

from mlglm._imports import numpy as np

from mlglm._utilities.errors import DomainError


def dims(model, n):
    """Layer sizes ``n₀, ..., n_L`` with ``n_l = round(α_l n)``.

    Halves are rounded up. A layer that would round to zero is
    rejected.
    """
    if int(n) != n or n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")

    n = int(n)
    sizes = [n]
    for layer_index, alpha in enumerate(model.alphas[1:], start=1):
        scaled = alpha * n
        if scaled < 0.5:
            raise DomainError(
                f"Layer {layer_index} has alpha * n = {scaled:g} < 0.5 and "
                "would round to zero"
            )

        sizes.append(int(math.floor(scaled + 0.5)))

    return sizes


def layer_rng(rng_seed, replication, component):
    seed_sequence = np.random.SeedSequence(
        entropy=rng_seed, spawn_key=(int(replication), int(component))
    )
    return np.random.default_rng(seed_sequence)


@dataclass(frozen=True)
class Disorder:
    """One forward draw of the layer chain.

    ``signals[0]`` is the input ``X`` and ``signals[l]`` the layer ``l``
    output ``X^(l)``. ``matrices[l - 1]`` is ``Φ^(l)`` of shape
    ``(n_l, n_{l-1})`` and ``side_info[l - 1]`` holds the per-coordinate
    side information atom indices of layer ``l`` (``None`` when the
    activation is deterministic).
    """

    signals: Tuple["np.ndarray", ...]
    matrices: Tuple["np.ndarray", ...]
    side_info: Tuple[object, ...]
    noise: "np.ndarray"
    observation: "np.ndarray"

    @property
    def X(self):  # pylint: disable = invalid-name
        return self.signals[0]

    @property
    def Y(self):  # pylint: disable = invalid-name
        return self.observation

    @property
    def Z(self):  # pylint: disable = invalid-name
        return self.noise


def propagate(activation, matrix, signal, side_indices=None):
    """One layer step ``φ(Φ x / √n_in, A)``."""
    preactivation = matrix @ signal / np.sqrt(signal.shape[-1])

    if side_indices is None:
        return activation(preactivation)

    gains, shifts, _ = activation.side_arrays()
    return activation(preactivation, gains[side_indices], shifts[side_indices])


def sample_forward(model, n, rng_seed, replication=0):
    """Draw ``X``, the layer signals, the mixing matrices, side
    information and the observation ``Y° = √β X^(L) + Z``.

    Parameters
    ----------
    model : ModelSpec
    n : int
        Input dimension.
    rng_seed : int
        Run seed.
    replication : int, optional
        Replication index used to split the random streams.

    Returns
    -------
    disorder : Disorder
    """
    sizes = dims(model, n)

    prior_rng = layer_rng(rng_seed, replication, 0)
    signal = prior_rng.choice(model.prior.values, size=sizes[0], p=model.prior.weights)

    signals = [signal]
    matrices = []
    side_info = []

    for layer_index, activation in enumerate(model.activations, start=1):
        rng = layer_rng(rng_seed, replication, layer_index)
        matrix = rng.standard_normal((sizes[layer_index], sizes[layer_index - 1]))

        if activation.is_deterministic:
            side_indices = None
        else:
            _, _, weights = activation.side_arrays()
            side_indices = rng.choice(len(weights), size=sizes[layer_index], p=weights)

        signal = propagate(activation, matrix, signal, side_indices)

        signals.append(signal)
        matrices.append(matrix)
        side_info.append(side_indices)

    noise_rng = layer_rng(rng_seed, replication, model.L + 1)
    noise = noise_rng.standard_normal(sizes[-1])

    if model.beta == 0:
        observation = noise.copy()
    else:
        observation = np.sqrt(model.beta) * signals[-1] + noise

    return Disorder(
        signals=tuple(signals),
        matrices=tuple(matrices),
        side_info=tuple(side_info),
        noise=noise,
        observation=observation,
    )


def _normalised_norms(model, n, rng_seed, replication):
    disorder = sample_forward(model, n, rng_seed, replication)
    return np.array([np.mean(signal**2) for signal in disorder.signals[1:]])


def layer_norm_samples(model, n, replications, rng_seed, threads=1):
    """``|X^(l)|² / n_l`` for every layer and replication.

    Returns
    -------
    samples : np.ndarray
        Shape ``(replications, L)``.
    """

    def _sample(replication):
        return _normalised_norms(model, n, rng_seed, replication)

    if threads > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=threads) as executor:
            rows = list(executor.map(_sample, range(replications)))
    else:
        rows = [_sample(replication) for replication in range(replications)]

    return np.array(rows)


def empirical_rho(model, n, replications, rng_seed, threads=1):
    """Sample mean and unbiased variance of ``|X^(L)|² / n_L``.

    Parameters
    ----------
    model : ModelSpec
    n : int
    replications : int
        Number of independent disorder draws, at least two.
    rng_seed : int
    threads : int, optional

    Returns
    -------
    mean, variance : float
    """
    means, variances = empirical_rho_layers(model, n, replications, rng_seed, threads)
    return float(means[-1]), float(variances[-1])


def empirical_rho_layers(model, n, replications, rng_seed, threads=1):
    """Per layer sample means and variances of ``|X^(l)|² / n_l``."""
    if replications < 2:
        raise DomainError("At least two replications are required")

    logging.info(
        "Sampling layer norms with n=%s over %s replications", n, replications
    )
    samples = layer_norm_samples(model, n, replications, rng_seed, threads)

    return np.mean(samples, axis=0), np.var(samples, axis=0, ddof=1)


def norm_variance_decay(
    model, n_small, n_large, replications, rng_seed, n_boot=1000, threads=1
):
    """Compare the variance of ``|X^(L)|² / n_L`` at two sizes.

    Concentration of the norm means the variance should not grow with
    ``n``. The larger size passes when its variance is at most the
    smaller size variance plus three bootstrap standard deviations of
    the difference.

    Returns
    -------
    report : dict
    """
    small = layer_norm_samples(model, n_small, replications, rng_seed, threads)[:, -1]
    large = layer_norm_samples(model, n_large, replications, rng_seed + 1, threads)[
        :, -1
    ]

    boot_rng = np.random.default_rng(np.random.SeedSequence(rng_seed, spawn_key=(2**31,)))
    small_index = boot_rng.integers(0, replications, size=(n_boot, replications))
    large_index = boot_rng.integers(0, replications, size=(n_boot, replications))

    differences = np.var(large[large_index], axis=1, ddof=1) - np.var(
        small[small_index], axis=1, ddof=1
    )
    band = 3 * float(np.std(differences, ddof=1))

    variance_small = float(np.var(small, ddof=1))
    variance_large = float(np.var(large, ddof=1))

    passed = variance_large <= variance_small + band
    if not passed:
        logging.warning(
            "Norm variance grew from %.3e at n=%s to %.3e at n=%s",
            variance_small,
            n_small,
            variance_large,
            n_large,
        )

    return {
        "n": [n_small, n_large],
        "variance": [variance_small, variance_large],
        "mean": [float(np.mean(small)), float(np.mean(large))],
        "band": band,
        "passed": bool(passed),
    }
