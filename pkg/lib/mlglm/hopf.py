"""Hopf formula solutions of the limiting Hamilton-Jacobi equation and
their verification as weak solutions."""

# pylint: disable = unused-import

from ._hopf.field import HopfField, WeakSolutionReport, build_field
from ._hopf.field import verify_weak_solution as verify
from ._hopf.formula import hopf_evaluate, hopf_values
from ._hopf.initial import (
    INITIAL_DATA_REGISTRY,
    DomainOmega,
    SeparableInitialData,
    TabulatedFunction,
    linear,
    quadratic,
    softplus,
)
from ._hopf.from_model import model_initial_data
