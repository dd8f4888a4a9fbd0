from .fixedpoint import solve_fixed_point
from .grid import MAX_GRID_LAYERS, StageSolution, solve_grid, stage_value
from .limits import layer_limits, mutual_information, solve
from .objective import (
    SaddlePointResult,
    SaddleVariables,
    box_bounds,
    check_boxes,
    check_caps,
    default_caps,
    hamiltonian,
    phi_objective,
    project,
    stationarity_map,
    stationarity_residual,
)
