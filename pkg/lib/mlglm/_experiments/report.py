# Copyright (C) 2024 mlglm Contributors

# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at

#     http://www.apache.org/licenses/LICENSE-2.0

# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.


import json
import logging
import pathlib
from dataclasses import dataclass, field
from typing import Any, Dict, List

from mlglm._imports import numpy as np

from mlglm._version import __version__

REPORT_FILENAME = "report.json"


def _jsonable(value):
    if isinstance(value, dict):
        return {str(key): _jsonable(item) for key, item in value.items()}

    if isinstance(value, (list, tuple)):
        return [_jsonable(item) for item in value]

    if isinstance(value, np.ndarray):
        return _jsonable(value.tolist())

    if isinstance(value, np.bool_):
        return bool(value)

    if isinstance(value, np.integer):
        return int(value)

    if isinstance(value, np.floating):
        value = float(value)

    if isinstance(value, float) and not np.isfinite(value):
        return None

    return value


@dataclass
class RunReport:
    """Everything a run produced, echoed with its configuration."""

    config: Dict[str, Any]
    task: str
    results: Dict[str, Any] = field(default_factory=dict)
    diagnostics: Dict[str, Any] = field(default_factory=dict)
    artifacts: List[str] = field(default_factory=list)
    wall_time: float = 0.0
    version: str = __version__

    def to_dict(self):
        return _jsonable(
            {
                "version": self.version,
                "task": self.task,
                "config": self.config,
                "results": self.results,
                "diagnostics": self.diagnostics,
                "artifacts": self.artifacts,
                "wall_time": self.wall_time,
            }
        )

    def write(self, output_directory):
        path = pathlib.Path(output_directory).joinpath(REPORT_FILENAME)
        with open(path, "w") as f:
            json.dump(self.to_dict(), f, indent=2, sort_keys=True)
            f.write("\n")

        logging.info("Wrote run report to %s", path)
        return path


def write_csv(frame, output_directory, filename, artifacts):
    """Write a table artifact and record its name."""
    path = pathlib.Path(output_directory).joinpath(filename)
    frame.to_csv(path, index=False)
    artifacts.append(filename)

    logging.info("Wrote %s rows to %s", len(frame), path)
    return path
