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


"""Separable convex initial data ``ψ(y) = ψ₁(y₁) + ψ₂(y₂)``.

Both components are held as dense tables with linear interpolation.
``ψ₁`` lives on ``[0, ρ]`` and ``ψ₂`` on ``[0, y_end]``, beyond which it
is continued with its last slope.
"""

from dataclasses import dataclass

from mlglm._imports import numpy as np

from mlglm._utilities.errors import ConfigError, DomainError

SHAPE_TOLERANCE = 1e-9
H2_MAX_FACTOR = 4.0
DEFAULT_PSI1_POINTS = 2049
DEFAULT_PSI2_POINTS = 4097


def linear(slope, intercept=0.0):
    def component(u):
        return intercept + slope * np.asarray(u, dtype=float)

    return component


def quadratic(curvature, slope=0.0, intercept=0.0):
    def component(u):
        u = np.asarray(u, dtype=float)
        return intercept + slope * u + curvature * u**2 / 2

    return component


def softplus(slope, scale=1.0, centre=0.0, intercept=0.0):
    """``slope · scale · log(1 + exp((u − centre) / scale))``, slope within (0, slope)."""

    def component(u):
        u = np.asarray(u, dtype=float)
        return intercept + slope * scale * np.logaddexp(0.0, (u - centre) / scale)

    return component


INITIAL_DATA_REGISTRY = {
    "linear": linear,
    "quadratic": quadratic,
    "softplus": softplus,
}


def registry_component(kind, **parameters):
    try:
        factory = INITIAL_DATA_REGISTRY[kind]
    except KeyError:
        raise ConfigError(
            f"unknown initial datum `{kind}`, expected one of "
            f"{sorted(INITIAL_DATA_REGISTRY)}",
            "kind",
        ) from None

    try:
        return factory(**parameters)
    except TypeError as e:
        raise ConfigError(str(e), "kind") from None


@dataclass(frozen=True)
class TabulatedFunction:
    """Piecewise linear function through ``(x, values)``.

    ``x`` is strictly increasing and starts at zero. To the right of the
    table the function continues with its last slope.
    """

    x: "np.ndarray"
    values: "np.ndarray"

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        values = np.asarray(self.values, dtype=float)

        if x.ndim != 1 or x.shape != values.shape or len(x) < 2:
            raise ConfigError("tables need matching one dimensional x and values")

        if x[0] != 0 or np.any(np.diff(x) <= 0):
            raise ConfigError("table abscissae must start at 0 and increase strictly")

        if not np.all(np.isfinite(values)):
            raise ConfigError("table values must be finite")

        x.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_callable(cls, func, end, points):
        x = np.linspace(0.0, end, points)
        return cls(x=x, values=np.asarray(func(x), dtype=float))

    @property
    def end(self):
        return float(self.x[-1])

    @property
    def slopes(self):
        return np.diff(self.values) / np.diff(self.x)

    @property
    def terminal_slope(self):
        return float(self.slopes[-1])

    @property
    def lipschitz(self):
        return float(np.max(np.abs(self.slopes)))

    def __call__(self, u):
        u = np.asarray(u, dtype=float)
        inside = np.interp(u, self.x, self.values)
        beyond = self.values[-1] + self.terminal_slope * (u - self.x[-1])
        return np.where(u > self.x[-1], beyond, inside)

    def subgradient(self, u):
        """Slope of the segment containing ``u``, the right one at vertices."""
        index = np.searchsorted(self.x, np.asarray(u, dtype=float), side="right") - 1
        index = np.clip(index, 0, len(self.x) - 2)
        return self.slopes[index]

    def conjugate(self, z, upper=None):
        """``sup_{0 ≤ y ≤ upper} (z y − ψ(y))`` and its maximiser.

        Requires a convex table. ``upper`` defaults to the table end and
        may extend past it along the continued last slope.

        Returns
        -------
        values, argmax : np.ndarray
        """
        if upper is None:
            upper = self.end

        z = np.asarray(z, dtype=float)
        slopes = self.slopes

        # First vertex whose outgoing slope is at least z
        index = np.searchsorted(slopes, z, side="left")
        argmax = self.x[np.minimum(index, len(self.x) - 1)]

        past_end = z > slopes[-1]
        argmax = np.where(past_end, max(upper, self.end), argmax)

        return z * argmax - self(argmax), argmax

    def shifted(self, constant):
        return TabulatedFunction(x=self.x, values=self.values + constant)


def lower_convex_hull(table):
    """The greatest convex minorant of a table, retabulated on its abscissae."""
    x, values = table.x, table.values
    hull = []

    for i in range(len(x)):
        while len(hull) >= 2:
            a, b = hull[-2], hull[-1]
            cross = (x[b] - x[a]) * (values[i] - values[a]) - (values[b] - values[a]) * (
                x[i] - x[a]
            )
            if cross > 0:
                break
            hull.pop()
        hull.append(i)

    return TabulatedFunction(x=x, values=np.interp(x, x[hull], values[hull]))


def clip_slopes(table, low, high):
    """Retabulate with every segment slope clipped into ``[low, high]``."""
    slopes = np.clip(table.slopes, low, high)
    values = table.values[0] + np.concatenate([[0.0], np.cumsum(slopes * np.diff(table.x))])
    return TabulatedFunction(x=table.x, values=values)


def default_truncations(psi1, alpha, h2_max):
    """``R_CAP = 2 Lip(ψ₁) + 1`` and ``Y_MAX = h2_max + 2 R_CAP / α``."""
    r_cap = 2 * psi1.lipschitz + 1
    y_max = h2_max + 2 * r_cap / alpha

    return r_cap, y_max


def _check_shape(table, name, max_slope=None):
    slopes = table.slopes

    if np.min(slopes) < -SHAPE_TOLERANCE:
        raise ConfigError(
            f"must be nondecreasing, found slope {np.min(slopes):.3e}", name
        )

    curvature = np.diff(slopes)
    if len(curvature) and np.min(curvature) < -SHAPE_TOLERANCE:
        raise ConfigError(
            f"must be convex, found a slope decrease of {np.min(curvature):.3e}", name
        )

    if max_slope is not None and np.max(slopes) > max_slope + SHAPE_TOLERANCE:
        raise ConfigError(
            f"slope {np.max(slopes):.6g} exceeds alpha * rho / 2 = {max_slope:.6g}", name
        )


@dataclass(frozen=True)
class SeparableInitialData:
    """Convex, nondecreasing and Lipschitz separable initial condition.

    Parameters
    ----------
    psi1 : TabulatedFunction
        Tabulated on exactly ``[0, rho]``.
    psi2 : TabulatedFunction
        Slopes within ``[0, alpha * rho / 2]``.
    alpha : float
        The ratio setting the ``z₂`` box and the Hamiltonian.
    rho : float
    """

    psi1: TabulatedFunction
    psi2: TabulatedFunction
    alpha: float
    rho: float

    def __post_init__(self):
        if not self.alpha > 0:
            raise ConfigError("alpha must be positive", "alpha")

        if not self.rho > 0:
            raise ConfigError("rho must be positive", "rho")

        if not np.isclose(self.psi1.end, self.rho, rtol=1e-12, atol=0):
            raise ConfigError(
                f"psi1 must be tabulated on [0, rho={self.rho!r}], ends at {self.psi1.end!r}",
                "psi1",
            )

        _check_shape(self.psi1, "psi1")
        _check_shape(self.psi2, "psi2", max_slope=self.z2_max)

    @property
    def z2_max(self):
        return self.alpha * self.rho / 2

    @classmethod
    def from_callables(
        cls,
        psi1,
        psi2,
        alpha,
        rho,
        psi2_end=None,
        psi1_points=DEFAULT_PSI1_POINTS,
        psi2_points=DEFAULT_PSI2_POINTS,
    ):
        """Tabulate callables, ``psi2`` by default up to the ``Y_MAX`` of
        ``h₂ ≤ 4 α ρ``."""
        psi1_table = TabulatedFunction.from_callable(psi1, rho, psi1_points)
        if psi2_end is None:
            _, psi2_end = default_truncations(psi1_table, alpha, H2_MAX_FACTOR * alpha * rho)

        return cls(
            psi1=psi1_table,
            psi2=TabulatedFunction.from_callable(psi2, psi2_end, psi2_points),
            alpha=alpha,
            rho=rho,
        )

    @classmethod
    def from_dict(cls, data, alpha, rho, psi2_end=None, path="parameters.data"):
        """Build from ``{"psi1": {"kind": ..., ...}, "psi2": {...}}``."""
        components = {}
        for name in ("psi1", "psi2"):
            try:
                entry = dict(data[name])
            except (KeyError, TypeError):
                raise ConfigError("missing initial datum", f"{path}.{name}") from None

            kind = entry.pop("kind", None)
            try:
                components[name] = registry_component(kind, **entry)
            except ConfigError as e:
                raise e.with_prefix(f"{path}.{name}") from None

        try:
            return cls.from_callables(
                components["psi1"], components["psi2"], alpha, rho, psi2_end
            )
        except ConfigError as e:
            raise e.with_prefix(path) from None

    def __call__(self, y1, y2):
        return self.psi1(y1) + self.psi2(y2)

    def shifted(self, constant):
        """The same data plus a constant, split evenly over the components."""
        return SeparableInitialData(
            psi1=self.psi1.shifted(constant / 2),
            psi2=self.psi2.shifted(constant / 2),
            alpha=self.alpha,
            rho=self.rho,
        )


@dataclass(frozen=True)
class DomainOmega:
    """``Ω_ρ = {(t, h₁, h₂) : 0 ≤ t ≤ 1, 0 ≤ h₁ ≤ ρ(1 − t), h₂ ≥ 0}``."""

    rho: float

    def __post_init__(self):
        if not self.rho > 0:
            raise DomainError("rho must be positive")

    def contains(self, t, h1, h2, tolerance=1e-12):
        t = np.asarray(t, dtype=float)
        h1 = np.asarray(h1, dtype=float)
        h2 = np.asarray(h2, dtype=float)

        return (
            (t >= 0)
            & (t <= 1)
            & (h1 >= 0)
            & (h2 >= 0)
            & (h1 <= self.rho * (1 - t) + tolerance * self.rho)
        )

    def check(self, t, h1, h2):
        t, h1, h2 = np.broadcast_arrays(t, h1, h2)
        inside = self.contains(t, h1, h2)

        if not np.all(inside):
            index = np.argmin(np.ravel(inside))
            point = tuple(float(np.ravel(value)[index]) for value in (t, h1, h2))
            raise DomainError(
                f"The point (t, h1, h2) = {point} lies outside of Omega with "
                f"rho={self.rho!r}"
            )
