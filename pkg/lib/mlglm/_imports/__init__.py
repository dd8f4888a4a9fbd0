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



"""Lazily resolved third-party modules.

Usage within the library is ``from mlglm._imports import numpy as np``.
``apipkg`` defers the actual import until the first attribute lookup on
the returned module, so a missing optional dependency only fails the
code path that needs it.
"""

import pathlib

import apipkg

from mlglm._imports import _parse

HERE = pathlib.Path(__file__).parent

imports_for_apipkg = _parse.parse_imports(HERE.joinpath("imports.py"))
apipkg.initpkg(__name__, imports_for_apipkg)  # type: ignore

# initpkg clears this module's globals, so import after it
import importlib  # pylint: disable = wrong-import-position

THIS = importlib.import_module(__name__)
IMPORTABLES = dir(THIS)

# Never runs, it tells pylint which names this module provides
if "numpy" not in IMPORTABLES:
    from .imports import *  # pylint: disable = wildcard-import, unused-wildcard-import

    raise ValueError("The lazy module table failed to initialise")
