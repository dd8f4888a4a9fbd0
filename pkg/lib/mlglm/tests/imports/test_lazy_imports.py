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


"""The lazy third-party module loader."""

import pytest

import mlglm._imports
from mlglm._imports import _parse


def test_listed_modules_are_exposed():
    assert {"jsonschema", "numpy", "pandas", "scipy", "toml", "tqdm"} <= set(
        dir(mlglm._imports)
    )


def test_submodules_load_with_their_package():
    from mlglm._imports import scipy  # pylint: disable = import-outside-toplevel

    assert scipy.special.logsumexp([0.0, 0.0]) == pytest.approx(0.6931471805599453)


def test_unknown_module():
    with pytest.raises(AttributeError):
        mlglm._imports.not_a_dependency  # pylint: disable = pointless-statement


def test_only_plain_imports_are_accepted(tmp_path):
    path = tmp_path.joinpath("imports.py")

    path.write_text("import numpy as np\nimport scipy.special\n")
    assert _parse.parse_imports(path) == {
        "np": "numpy",
        "scipy": "scipy",
        "scipy.special": "scipy.special",
    }

    path.write_text("from numpy import array\n")
    with pytest.raises(ValueError):
        _parse.parse_imports(path)
