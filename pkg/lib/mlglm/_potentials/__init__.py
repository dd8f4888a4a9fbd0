from .core import (
    DEFAULT_STEP,
    H2_LIMIT,
    PotentialPoint,
    PotentialRules,
    channel_density,
    log_channel_density,
    psi0,
    psi0_derivative,
    psi_layer,
    psi_partial,
)
from .diagnostics import PotentialTable, potential_diagnostics, tabulate_potentials
