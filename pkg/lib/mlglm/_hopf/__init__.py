from .field import (
    DEFAULT_TOLERANCES,
    HopfField,
    WeakSolutionReport,
    build_field,
    verify_weak_solution,
)
from .formula import HopfSolution, hopf_evaluate, hopf_values
from .initial import (
    H2_MAX_FACTOR,
    INITIAL_DATA_REGISTRY,
    DomainOmega,
    SeparableInitialData,
    TabulatedFunction,
    clip_slopes,
    default_truncations,
    linear,
    lower_convex_hull,
    quadratic,
    registry_component,
    softplus,
)
from .from_model import model_initial_data
