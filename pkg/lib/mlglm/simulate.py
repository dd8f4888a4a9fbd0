# pylint: disable = unused-import, missing-docstring

from ._simulate.enumerate import exact_log_partition
from ._simulate.estimate import (
    FreeEnergyEstimate,
    compare_with_limit,
    estimate_free_energy,
    monotone_information_check,
)
