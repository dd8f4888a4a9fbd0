# pylint: disable = unused-import, missing-docstring

from ._potentials.core import (
    PotentialRules,
    channel_density,
    psi0,
    psi0_derivative,
    psi_layer,
    psi_partial,
)
from ._potentials.diagnostics import potential_diagnostics
from ._potentials.diagnostics import tabulate_potentials as tabulate
