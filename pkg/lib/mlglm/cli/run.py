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


import json
import logging
import sys

from mlglm._experiments import TASK_PARAMETERS
from mlglm._experiments import run as run_experiment
from mlglm._utilities.errors import exit_code_for


def run_cli(subparsers):
    parser = subparsers.add_parser(
        "run",
        help=(
            "Execute the task of a JSON run configuration. Available tasks: "
            f"{', '.join(TASK_PARAMETERS)}."
        ),
    )

    parser.add_argument("--config", required=True, help="Path to the run configuration.")
    parser.add_argument("--seed", type=int, default=None, help="Override the seed.")
    parser.add_argument(
        "--out", dest="output", default=None, help="Override the output directory."
    )
    parser.add_argument(
        "--threads", type=int, default=None, help="Override the thread count."
    )
    parser.add_argument(
        "--set",
        dest="overrides",
        action="append",
        default=[],
        metavar="DOTTED.KEY=VALUE",
        help=(
            "Override a configuration entry, for example "
            "`--set model.layers.0.alpha=0.5`. May be repeated."
        ),
    )

    parser.set_defaults(func=run_command)

    return parser


def error_line(error):
    """The machine readable single line description of a failure."""
    return json.dumps(
        {
            "error": getattr(error, "category", "internal"),
            "message": getattr(error, "message", str(error)),
            "path": getattr(error, "path", None),
        }
    )


def run_command(args):
    try:
        report = run_experiment(
            args.config,
            args.overrides,
            seed=args.seed,
            output=args.output,
            threads=args.threads,
        )
    except (ValueError, ArithmeticError, RuntimeError) as e:
        logging.debug("Run failed", exc_info=True)
        sys.stderr.write(error_line(e) + "\n")
        sys.exit(exit_code_for(e))

    print(json.dumps(report.results, indent=2, sort_keys=True, default=str))
