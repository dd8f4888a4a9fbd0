from .enumerate import MAX_STATES, exact_log_partition, gray_changes, to_gray_digits
from .estimate import (
    FINITE_SIZE_SLACK,
    FreeEnergyEstimate,
    compare_with_limit,
    estimate_free_energy,
    monotone_information_check,
    replication_free_energy,
)
