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


import collections
import logging

from mlglm import _config
from mlglm.cli import run_logging_basic_config

Args = collections.namedtuple("Args", ["logging_verbose", "logging_debug"])


def test_setting_logging():
    args = Args(logging_verbose=False, logging_debug=False)
    run_logging_basic_config(args, {"level": logging.DEBUG})

    assert logging.root.getEffectiveLevel() == logging.DEBUG

    run_logging_basic_config(args, {"level": "error"})

    assert logging.root.getEffectiveLevel() == logging.ERROR

    run_logging_basic_config(args, {})

    assert logging.root.getEffectiveLevel() == logging.WARNING

    args_verbose = Args(logging_verbose=True, logging_debug=False)
    run_logging_basic_config(args_verbose, {"level": "error"})

    assert logging.root.getEffectiveLevel() == logging.INFO

    args_both = Args(logging_verbose=True, logging_debug=True)
    run_logging_basic_config(args_both, {})

    assert logging.root.getEffectiveLevel() == logging.DEBUG


def test_logging_config_from_settings_file(tmp_path):
    target = tmp_path.joinpath("target")
    target.mkdir()
    target.joinpath("config.toml").write_text('[cli.logging]\nlevel = "info"\n')

    tmp_path.joinpath("config.toml").write_text(
        f"redirect = {str(target.joinpath('config.toml'))!r}\n"
    )

    assert _config.get_logging_config(tmp_path) == {"level": "info"}
    assert _config.get_logging_config(tmp_path.joinpath("absent")) == {}
