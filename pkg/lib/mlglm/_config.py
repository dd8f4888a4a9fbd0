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

"""User level settings stored in ``~/.mlglm/config.toml``.

Only the ``[cli.logging]`` table is read at present. A top level
``redirect`` key points at another settings file, which is followed
until a file without a redirect is found.
"""

import pathlib

from mlglm._imports import toml

CONFIG_DIR_NAME = ".mlglm"


def get_config_dir():
    return pathlib.Path.home().joinpath(CONFIG_DIR_NAME)


def get_config(path=None):
    if path is None:
        path = get_config_dir()

    config_path = pathlib.Path(path).joinpath("config.toml")
    visited = set()

    while True:
        if config_path in visited:
            raise ValueError(f"Circular redirect within {config_path}")
        visited.add(config_path)

        with open(config_path) as f:
            results = toml.load(f)

        try:
            config_path = pathlib.Path(results["redirect"])
        except KeyError:
            break

    return results


def get_logging_config(path=None):
    try:
        config = get_config(path)
    except FileNotFoundError:
        return {}

    try:
        return dict(config["cli"]["logging"])
    except KeyError:
        return {}
