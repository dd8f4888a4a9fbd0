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



import argparse
import logging
import sys

from mlglm import _config

from .dev import dev_cli
from .run import run_cli

DEFAULT_LOG_FORMAT = "%(asctime)s %(levelname)-8s %(message)s"
DEBUG_LOG_SUFFIX = "\n    %(pathname)s#%(lineno)d"
DEFAULT_DATE_FORMAT = "%Y-%m-%d %H:%M:%S"


class DefaultHelpParser(argparse.ArgumentParser):
    def error(self, message):
        sys.stderr.write(f"error: {message}\n")
        self.print_help()
        sys.exit(2)


def define_parser():
    parser = DefaultHelpParser(
        prog="mlglm",
        description="Limiting free energy of multi-layer generalised linear models.",
    )
    subparsers = parser.add_subparsers()

    run_cli(subparsers)
    dev_cli(subparsers)

    parser.add_argument(
        "-v",
        "--verbose",
        help="Log the progress of a run",
        action="store_true",
        dest="logging_verbose",
    )
    parser.add_argument(
        "-d",
        "--debug",
        help="Log every solver iteration",
        action="store_true",
        dest="logging_debug",
    )

    return parser


def _logging_level(args, configured):
    if args.logging_debug:
        return logging.DEBUG

    if args.logging_verbose:
        return logging.INFO

    if isinstance(configured, str):
        return getattr(logging, configured.upper(), logging.WARNING)

    return configured


def run_logging_basic_config(args, logging_config):
    """Configure the root logger from ``[cli.logging]`` and the flags.

    ``--debug`` wins over ``--verbose``, and both win over the level
    within the settings file.
    """
    logging_config = dict(logging_config)
    logging_config["level"] = _logging_level(
        args, logging_config.get("level", logging.WARNING)
    )

    if "format" not in logging_config:
        logging_config["format"] = DEFAULT_LOG_FORMAT
        if logging_config["level"] <= logging.DEBUG:
            logging_config["format"] += DEBUG_LOG_SUFFIX

    logging_config.setdefault("datefmt", DEFAULT_DATE_FORMAT)

    logging.basicConfig(force=True, **logging_config)

    if args.logging_debug and args.logging_verbose:
        logging.warning("Both --verbose and --debug were given, using --debug")

    logging.debug("Configured logging with %s", logging_config)

    return logging_config


def mlglm_cli(argv=None):
    parser = define_parser()

    args, remaining = parser.parse_known_args(argv)
    run_logging_basic_config(args, _config.get_logging_config())

    if not hasattr(args, "func"):
        parser.print_help()
        return

    # The dev commands forward unknown arguments on to pytest
    if getattr(args, "pass_remaining", False):
        args.func(args, remaining)
        return

    args = parser.parse_args(argv)
    args.func(args)
