# DO NOT EDIT THIS FILE!
# This file is kept in sync with pyproject.toml by hand on release.

version_info = [0, 3, 0, "dev0"]
__version__ = "0.3.0-dev0"
