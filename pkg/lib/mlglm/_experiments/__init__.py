from .config import (
    SCHEMA_VERSION,
    TASK_PARAMETERS,
    RunConfig,
    apply_override,
    load_config,
    parse_override,
    resolve_parameters,
)
from .report import RunReport
from .tasks import TASK_RUNNERS, run, run_config
