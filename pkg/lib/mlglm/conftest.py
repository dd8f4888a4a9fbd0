"""Command line options and collection rules for the test suite.

Tests marked ``slow`` only run when ``--slow`` is given, in which case
every other test is skipped. ``--all`` runs everything.
"""

import os
import pathlib

import pytest

SKIPPING_CONFIG = {
    "slow": {
        "options": ["--run-only-slow", "--slow"],
        "help": "run only the slow tests, which solve fine grids and large simulations",
        "description": "mark test as slow to run",
        "skip_otherwise": True,
    },
    "all": {
        "options": ["--run-all-tests", "--all"],
        "help": "run all tests",
        "description": "run all tests, including those skipped by default",
        "skip_otherwise": False,
    },
}

ALWAYS_IGNORED = {"site-packages", "_build"}

# Directories without doctests, or whose imports pull in pytest itself
NOT_DOCTESTED = {"tests", "_imports", "_dev", "cli"}


def _provided_option(config, options):
    for option in options:
        if config.getoption(option):
            return option

    return None


def pytest_addoption(parser):
    for skip_item in SKIPPING_CONFIG.values():
        for option in skip_item["options"]:
            parser.addoption(
                option, action="store_true", default=False, help=skip_item["help"]
            )


def pytest_configure(config):
    for marker, skip_item in SKIPPING_CONFIG.items():
        config.addinivalue_line("markers", f"{marker}: {skip_item['description']}")


def pytest_collection_modifyitems(config, items):
    if _provided_option(config, SKIPPING_CONFIG["all"]["options"]):
        return

    for marker, skip_item in SKIPPING_CONFIG.items():
        provided = _provided_option(config, skip_item["options"])

        if provided is None:
            if not skip_item["skip_otherwise"]:
                continue

            skip = pytest.mark.skip(reason=f"need {skip_item['options'][-1]} option to run")
            skipped = [item for item in items if marker in item.keywords]
        else:
            skip = pytest.mark.skip(reason=f"since {provided} was passed")
            skipped = [item for item in items if marker not in item.keywords]

        for item in skipped:
            item.add_marker(skip)


def pytest_ignore_collect(collection_path, config):
    parts = set(
        pathlib.Path(os.path.relpath(str(collection_path), os.path.dirname(__file__))).parts
    )

    if parts & ALWAYS_IGNORED:
        return True

    if config.getoption("--doctest-modules") and parts & NOT_DOCTESTED:
        return True

    return None
