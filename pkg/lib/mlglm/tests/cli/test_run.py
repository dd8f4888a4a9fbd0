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


"""The ``mlglm run`` command end to end."""

import json

import pytest

from mlglm._experiments import RunConfig, load_config
from mlglm._recursion import compute_rho
from mlglm.cli import mlglm_cli
from mlglm.model import ModelSpec

from ..model.test_spec import tanh_model_dict

COARSE_RULES = {"outer": 16, "inner": 24, "prior": 40}


def write_config(directory, task, parameters=None, alphas=(1.0, 1.0), beta=1.0):
    config = {
        "schema_version": 1,
        "model": tanh_model_dict(alphas=alphas, beta=beta),
        "task": task,
        "parameters": parameters or {},
        "seed": 0,
        "output": str(directory.joinpath("out")),
        "threads": 1,
    }

    path = directory.joinpath("config.json")
    path.write_text(json.dumps(config))

    return path


def run_cli(*arguments):
    try:
        mlglm_cli(["run", *arguments])
    except SystemExit as e:
        return e.code

    return 0


def last_error(capsys):
    return json.loads(capsys.readouterr().err.strip().splitlines()[-1])


def read_report(directory):
    return json.loads(directory.joinpath("report.json").read_text())


def test_rho_task(tmp_path, capsys):
    path = write_config(tmp_path, "rho")

    assert run_cli("--config", str(path)) == 0

    report = read_report(tmp_path.joinpath("out"))
    model = ModelSpec.from_dict(tanh_model_dict(alphas=(1.0, 1.0)))

    assert report["task"] == "rho"
    assert report["results"]["rho"][0] == 1.0
    assert report["results"]["rho"] == pytest.approx(compute_rho(model).to_list())
    assert report["wall_time"] >= 0
    assert "version" in report

    assert json.loads(capsys.readouterr().out)["rho"] == report["results"]["rho"]


def test_report_config_round_trips(tmp_path):
    path = write_config(tmp_path, "rho", {"order": 100})
    assert run_cli("--config", str(path)) == 0

    echo = read_report(tmp_path.joinpath("out"))["config"]
    assert RunConfig.from_dict(echo) == load_config(path)


def test_non_positive_alpha(tmp_path, capsys):
    path = write_config(tmp_path, "rho", alphas=(0.0, 1.0))

    assert run_cli("--config", str(path)) == 2

    error = last_error(capsys)
    assert error["error"] == "config"
    assert "layers[0].alpha" in error["path"]


def test_unknown_parameter(tmp_path, capsys):
    path = write_config(tmp_path, "saddle", {"resolutoin": 8})

    assert run_cli("--config", str(path)) == 2
    assert "parameters.resolutoin" in capsys.readouterr().err


def test_missing_config(tmp_path, capsys):
    assert run_cli("--config", str(tmp_path.joinpath("absent.json"))) == 2
    assert last_error(capsys)["path"] == "config"


def test_overrides(tmp_path):
    path = write_config(tmp_path, "rho")
    out = tmp_path.joinpath("elsewhere")

    code = run_cli(
        "--config",
        str(path),
        "--set",
        "model.layers.1.alpha=0.5",
        "--set",
        "parameters.order=64",
        "--seed",
        "9",
        "--out",
        str(out),
    )
    assert code == 0

    config = read_report(out)["config"]
    assert config["model"]["layers"][1]["alpha"] == 0.5
    assert config["parameters"]["order"] == 64
    assert config["seed"] == 9


def test_psi_table_is_reproducible(tmp_path):
    parameters = {
        "h1_points": 3,
        "h2_points": 3,
        "r_points": 4,
        "rules": COARSE_RULES,
    }
    path = write_config(tmp_path, "psi-table", parameters, alphas=(1.0,))

    assert run_cli("--config", str(path), "--out", str(tmp_path.joinpath("a"))) == 0
    assert run_cli("--config", str(path), "--out", str(tmp_path.joinpath("b"))) == 0

    for name in ("psi_table.csv", "psi0_table.csv"):
        first = tmp_path.joinpath("a", name).read_bytes()
        assert first == tmp_path.joinpath("b", name).read_bytes()

    header = tmp_path.joinpath("a", "psi_table.csv").read_text().splitlines()[0]
    assert header == "layer,h1,h2,psi,psi_compensated"


def test_compare_task(tmp_path):
    parameters = {
        "method": "grid",
        "resolution": 8,
        "refine_rounds": 0,
        "rules": COARSE_RULES,
        "n": 6,
        "replications": 4,
    }
    path = write_config(tmp_path, "compare", parameters, alphas=(1.0,))

    assert run_cli("--config", str(path)) == 0

    report = read_report(tmp_path.joinpath("out"))
    comparison = report["results"]["comparison"]

    assert set(comparison) >= {"difference", "stderr", "passed", "slack"}
    assert comparison["slack"] == 0.05
    assert report["artifacts"] == ["simulation.csv"]


def test_simulation_artifacts_are_reproducible(tmp_path):
    path = write_config(tmp_path, "simulate", {"n": 5, "replications": 3}, alphas=(1.0,))

    assert run_cli("--config", str(path), "--out", str(tmp_path.joinpath("a"))) == 0
    assert run_cli(
        "--config", str(path), "--out", str(tmp_path.joinpath("b")), "--threads", "2"
    ) == 0

    first = tmp_path.joinpath("a", "simulation.csv").read_bytes()
    assert first == tmp_path.joinpath("b", "simulation.csv").read_bytes()
    assert first.decode().splitlines()[0] == "rep,F,seed"


def test_hopf_check_with_registry_data(tmp_path):
    parameters = {
        "data": {
            "psi1": {"kind": "linear", "slope": 0.5},
            "psi2": {"kind": "linear", "slope": 0.25},
        },
        "t_points": 4,
        "s_points": 6,
        "h2_points": 6,
        "inner_grid": 33,
    }
    path = write_config(tmp_path, "hopf-check", parameters, alphas=(1.0,))

    assert run_cli("--config", str(path)) == 0

    report = read_report(tmp_path.joinpath("out"))
    assert report["results"]["weak_solution"]["passed"]
    assert report["artifacts"] == ["hopf_field.csv"]


def test_hopf_check_rejects_steep_data(tmp_path, capsys):
    parameters = {
        "data": {
            "psi1": {"kind": "linear", "slope": 0.5},
            "psi2": {"kind": "linear", "slope": 0.9},
        }
    }
    path = write_config(tmp_path, "hopf-check", parameters, alphas=(1.0,))

    assert run_cli("--config", str(path)) == 2
    assert last_error(capsys)["path"] == "parameters.data.psi2"


def test_saddle_task_at_zero_signal(tmp_path):
    parameters = {"method": "fixed-point", "n_restarts": 2, "rules": COARSE_RULES}
    path = write_config(tmp_path, "saddle", parameters, alphas=(1.0,), beta=0.0)

    assert run_cli("--config", str(path)) == 0

    results = read_report(tmp_path.joinpath("out"))["results"]
    assert results["value"] == pytest.approx(-0.5, abs=1e-3)
    assert results["mutual_information"] == pytest.approx(0, abs=1e-3)
    assert results["method"] == "fixed-point"


def test_no_subcommand_prints_help(capsys):
    mlglm_cli([])
    assert "usage: mlglm" in capsys.readouterr().out
