"""The limiting free energy as a nested saddle point.

``solve`` dispatches to the certified grid search for one or two layers
and to the damped fixed point iteration otherwise.
"""

# pylint: disable = unused-import

from ._saddle.fixedpoint import solve_fixed_point as fixed_point
from ._saddle.grid import solve_grid as grid
from ._saddle.limits import layer_limits, mutual_information, solve
from ._saddle.objective import (
    SaddlePointResult,
    SaddleVariables,
    hamiltonian,
    phi_objective,
    stationarity_residual,
)
