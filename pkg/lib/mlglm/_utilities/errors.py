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

"""Error categories shared across the library.

The command line maps each category onto an exit status, see
``EXIT_CODES``.
"""


class ConfigError(ValueError):
    """A model or run configuration failed validation."""

    category = "config"

    def __init__(self, message, path=None):
        self.message = message
        self.path = path
        if path:
            message = f"{path}: {message}"
        super().__init__(message)

    def with_prefix(self, prefix):
        """The same error located below ``prefix`` in a larger document."""
        if not self.path:
            return ConfigError(self.message, prefix)

        joiner = "" if self.path.startswith("[") else "."
        return ConfigError(self.message, f"{prefix}{joiner}{self.path}")


class DomainError(ValueError):
    """A numerical operation was called outside of its domain."""

    category = "domain"


class NumericalError(ArithmeticError):
    """A numerical evaluation produced an unusable result."""

    category = "numerical"


class TruncationError(NumericalError):
    """An optimum touched one of the finite truncation caps."""

    category = "truncation"


class UnsupportedMethodError(ValueError):
    """The requested solver cannot handle the given model."""

    category = "unsupported-method"


class NonConvergenceError(RuntimeError):
    """An iterative solver did not converge."""

    category = "non-convergence"

    def __init__(self, message, best_residual=None):
        self.best_residual = best_residual
        if best_residual is not None:
            message = f"{message} (best residual {best_residual:.3e})"
        super().__init__(message)


EXIT_CODES = {
    ConfigError: 2,
    DomainError: 3,
    NumericalError: 3,
    UnsupportedMethodError: 3,
    NonConvergenceError: 4,
}


def exit_code_for(error):
    for error_type in type(error).__mro__:
        try:
            return EXIT_CODES[error_type]
        except KeyError:
            continue

    return 1
