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

from mlglm._dev import tests


def dev_cli(subparsers):
    dev_parser = subparsers.add_parser("dev", help="Development helpers.")
    dev_subparsers = dev_parser.add_subparsers(dest="dev")
    add_test_parser(dev_subparsers)
    add_doctests_parser(dev_subparsers)

    return dev_parser


def add_test_parser(dev_subparsers):
    parser = dev_subparsers.add_parser(
        "tests", help="Run the test suite, passing any further arguments to pytest."
    )
    parser.set_defaults(func=tests.run_tests, pass_remaining=True)


def add_doctests_parser(dev_subparsers):
    parser = dev_subparsers.add_parser("doctests")
    parser.set_defaults(func=tests.run_doctests, pass_remaining=True)
