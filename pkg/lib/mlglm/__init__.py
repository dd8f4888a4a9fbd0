"""Limiting free energy of multi-layer generalised linear models."""

from . import hopf, model, potentials, quadrature, saddle, simulate
from ._experiments import load_config, run
from ._version import __version__, version_info
