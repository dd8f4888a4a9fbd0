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


"""Exact log partition functions by enumeration of the discrete prior.

For deterministic activations

    log Z° = log Σ_x P(x) exp(−|Y° − √β x^(L)|² / 2)

over every ``x`` in ``support^n``. The leading coordinates are walked in
reflected Gray code order so that ``Φ^(1) x`` changes by a single column
per state. The trailing coordinates form a block enumerated at once and
combined by a matrix product.
"""

import concurrent.futures
import itertools
import logging
import math

from mlglm._imports import numpy as np
from mlglm._imports import scipy

from mlglm._model import dims
from mlglm._utilities.errors import DomainError

MAX_STATES = 2**24
TRAILING_STATES = 4096


def to_gray_digits(index, base, n_digits):
    """The base ``base`` reflected Gray code of ``index``, least significant first.

    Examples
    --------
    >>> to_gray_digits(3, 2, 3)
    [0, 1, 0]
    >>> to_gray_digits(5, 3, 2)
    [0, 1]
    """
    gray = []
    for position in range(n_digits):
        digit = (index // base**position) % base

        # Every completed sweep of the higher digits reverses this one
        if (index // base ** (position + 1)) % 2:
            digit = base - 1 - digit
        gray.append(digit)

    return gray


def gray_changes(base, n_digits):
    """Single digit changes walking the reflected Gray code from all zeros.

    Yields
    ------
    position, old, new : int
    """
    digits = [0] * n_digits
    directions = [1] * n_digits

    for step in range(1, base**n_digits):
        position = 0
        value = step
        while value % base == 0:
            value //= base
            position += 1

        old = digits[position]
        digits[position] += directions[position]
        if digits[position] in (0, base - 1):
            directions[position] = -directions[position]

        yield position, old, digits[position]


def _check_enumerable(model, n):
    for layer, activation in enumerate(model.activations, start=1):
        if not activation.is_deterministic:
            raise DomainError(
                f"Layer {layer} carries side information, which enumeration does not support"
            )

    support = model.prior.support_size
    if support**n > MAX_STATES:
        raise DomainError(
            f"Enumerating {support}^{n} signals exceeds the cap of {MAX_STATES} states"
        )


def _trailing_size(support, n):
    if support == 1:
        return n

    return min(n, int(math.floor(math.log(TRAILING_STATES) / math.log(support))))


class _Enumeration:
    """Shared state of one exact enumeration."""

    def __init__(self, model, n, disorder):
        self.model = model
        self.n = n
        self.sizes = dims(model, n)
        self.values = np.array(model.prior.values)
        self.log_weights = np.log(np.array(model.prior.weights))
        self.support = len(self.values)

        self.trailing = _trailing_size(self.support, n)
        self.leading = n - self.trailing

        first = disorder.matrices[0] / np.sqrt(n)
        self.leading_columns = first[:, : self.leading]

        indices = np.array(
            list(itertools.product(range(self.support), repeat=self.trailing)), dtype=int
        ).reshape(-1, self.trailing)
        trailing_signals = self.values[indices]
        self.trailing_pre = trailing_signals @ first[:, self.leading :].T
        self.trailing_log_weights = self.log_weights[indices].sum(axis=1)

        self.deeper = [
            matrix / np.sqrt(matrix.shape[1]) for matrix in disorder.matrices[1:]
        ]
        self.observation = disorder.observation
        self.sqrt_beta = np.sqrt(model.beta)

    def block_log_terms(self, leading_pre, leading_log_weight):
        """Log terms of every trailing completion of one leading state."""
        activations = self.model.activations
        signal = activations[0](leading_pre[None, :] + self.trailing_pre)

        for activation, matrix in zip(activations[1:], self.deeper):
            signal = activation(signal @ matrix.T)

        residual = self.observation[None, :] - self.sqrt_beta * signal
        return (
            leading_log_weight
            + self.trailing_log_weights
            - 0.5 * np.einsum("ij,ij->i", residual, residual)
        )

    def shard(self, top_digit=None):
        """Log-sum-exp over the leading states, optionally with the last
        leading coordinate fixed to ``top_digit``."""
        free = self.leading if top_digit is None else self.leading - 1
        digits = [0] * free

        pre = np.zeros(self.sizes[1])
        log_weight = free * self.log_weights[0]

        if top_digit is not None:
            pre = pre + self.leading_columns[:, -1] * self.values[top_digit]
            log_weight += self.log_weights[top_digit]

        pre = pre + self.leading_columns[:, :free] @ self.values[digits]

        total = scipy.special.logsumexp(self.block_log_terms(pre, log_weight))

        for position, old, new in gray_changes(self.support, free):
            pre = pre + self.leading_columns[:, position] * (self.values[new] - self.values[old])
            log_weight += self.log_weights[new] - self.log_weights[old]

            total = np.logaddexp(
                total, scipy.special.logsumexp(self.block_log_terms(pre, log_weight))
            )

        return float(total)


def exact_log_partition(model, n, disorder, threads=1):
    """Exact ``log Z°`` of one disorder draw.

    Parameters
    ----------
    model : ModelSpec
        Every activation deterministic and ``support^n ≤ 2^24``.
    n : int
    disorder : Disorder
        A ``sample_forward`` draw of the same model and ``n``.
    threads : int, optional
        The enumeration is sharded over the value of the last leading
        coordinate.

    Returns
    -------
    float
    """
    _check_enumerable(model, n)

    if model.beta == 0:
        return float(-0.5 * disorder.observation @ disorder.observation)

    enumeration = _Enumeration(model, n, disorder)
    logging.debug(
        "Enumerating %s^%s states, %s leading coordinates",
        enumeration.support,
        n,
        enumeration.leading,
    )

    if enumeration.leading == 0:
        return enumeration.shard()

    shards = range(enumeration.support)
    if threads > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=threads) as executor:
            totals = list(executor.map(enumeration.shard, shards))
    else:
        totals = [enumeration.shard(top) for top in shards]

    return float(scipy.special.logsumexp(totals))
