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


"""Task runners behind ``mlglm run``.

Each runner receives a ``RunConfig`` and the output directory and fills
the ``results``, ``diagnostics`` and ``artifacts`` of a ``RunReport``.
"""

import logging
import pathlib
import time

from mlglm._hopf import (
    SeparableInitialData,
    build_field,
    hopf_evaluate,
    model_initial_data,
    verify_weak_solution,
)
from mlglm._model import empirical_rho_layers, norm_variance_decay
from mlglm._potentials import (
    PotentialRules,
    potential_diagnostics,
    tabulate_potentials,
)
from mlglm._recursion import compute_rho
from mlglm._saddle import MAX_GRID_LAYERS, layer_limits, mutual_information, solve
from mlglm._simulate import (
    compare_with_limit,
    estimate_free_energy,
    monotone_information_check,
)
from mlglm._utilities.errors import ConfigError

from .config import load_config
from .report import RunReport, write_csv


def _rules(parameters):
    if parameters["rules"] is None:
        return PotentialRules()

    return PotentialRules.from_dict(parameters["rules"])


def _solver_kwargs(config, model):
    parameters = config.parameters
    method = parameters["method"]
    if method == "auto":
        method = "grid" if model.L <= MAX_GRID_LAYERS else "fixed-point"

    kwargs = {"rules": _rules(parameters), "threads": config.threads}

    if method == "grid":
        kwargs.update(
            resolution=parameters["resolution"], refine_rounds=parameters["refine_rounds"]
        )
    else:
        kwargs.update(
            damping=parameters["damping"],
            tol=parameters["tol"],
            max_iter=parameters["max_iter"],
            n_restarts=parameters["n_restarts"],
            rng_seed=config.seed,
        )

    return method, kwargs


def _information(value, model, n=None):
    if not model.activations[-1].is_deterministic:
        return None

    return mutual_information(value, model, n)


def run_rho(config, report, _):
    parameters = config.parameters
    rho = compute_rho(config.model, parameters["order"])
    report.results["rho"] = rho.to_list()

    empirical = parameters["empirical"]
    if empirical is not None:
        means, variances = empirical_rho_layers(
            config.model,
            empirical["n"],
            empirical["replications"],
            config.seed,
            config.threads,
        )
        report.results["empirical"] = {
            **empirical,
            "mean": [float(value) for value in means],
            "variance": [float(value) for value in variances],
        }

    decay = parameters["variance_decay"]
    if decay is not None:
        report.diagnostics["variance_decay"] = norm_variance_decay(
            config.model,
            decay["n_small"],
            decay["n_large"],
            decay["replications"],
            config.seed,
            threads=config.threads,
        )


def run_psi_table(config, report, output_directory):
    parameters = config.parameters
    layer = parameters["layer"]
    if not 1 <= layer <= config.model.L:
        raise ConfigError(f"layer must lie within [1, {config.model.L}]", "parameters.layer")

    rules = _rules(parameters)
    rho = compute_rho(config.model)
    table = tabulate_potentials(
        config.model,
        rho,
        layer=layer,
        h1_points=parameters["h1_points"],
        h2_max=parameters["h2_max"],
        h2_points=parameters["h2_points"],
        r_max=parameters["r_max"],
        r_points=parameters["r_points"],
        rules=rules,
    )

    write_csv(table.layer_frame(), output_directory, "psi_table.csv", report.artifacts)
    write_csv(table.prior_frame(), output_directory, "psi0_table.csv", report.artifacts)

    report.results["rho"] = rho.to_list()
    report.diagnostics["potentials"] = potential_diagnostics(table)


def _saddle(config):
    rho = compute_rho(config.model)
    method, kwargs = _solver_kwargs(config, config.model)
    result = solve(config.model, rho, method, **kwargs)

    return rho, method, kwargs, result


def run_saddle(config, report, _):
    rho, method, kwargs, result = _saddle(config)

    report.results.update(
        {
            "rho": rho.to_list(),
            "value": result.value,
            "method": result.method,
            "residual": result.residual,
            "variables": result.variables.to_dict(),
            "mutual_information": _information(result.value, config.model),
        }
    )
    report.diagnostics["saddle"] = result.diagnostics

    if config.parameters["layer_limits"]:
        limits = layer_limits(config.model, rho, method, **kwargs)
        report.results["layer_limits"] = [limit.value for limit in limits]


def run_hopf_check(config, report, output_directory):
    parameters = config.parameters
    model = config.model
    rules = _rules(parameters)
    rho = compute_rho(model)

    alpha = model.alphas[model.L - 1]
    rho_below = rho[model.L - 1]

    if parameters["data"] is None:
        method, kwargs = _solver_kwargs(config, model.truncated(max(model.L - 1, 1)))
        kwargs.pop("rules")
        data = model_initial_data(
            model,
            rho,
            rules,
            psi1_points=parameters["psi1_points"],
            psi2_points=parameters["psi2_points"],
            method=method,
            **kwargs,
        )
    else:
        data = SeparableInitialData.from_dict(parameters["data"], alpha, rho_below)

    field = build_field(
        data,
        t_points=parameters["t_points"],
        s_points=parameters["s_points"],
        h2_points=parameters["h2_points"],
        t_max=parameters["t_max"],
        h2_max=parameters["h2_max"],
        inner_grid=parameters["inner_grid"],
        threads=config.threads,
    )
    verification = verify_weak_solution(field, parameters["tolerances"])

    write_csv(
        field.to_frame(verification.residual),
        output_directory,
        "hopf_field.csv",
        report.artifacts,
    )

    report.results["weak_solution"] = verification.to_dict()
    report.results["alpha"] = alpha
    report.results["rho"] = rho_below

    if parameters["data"] is None:
        hopf_value = hopf_evaluate(1.0, (0.0, 0.0), data, inner_grid=parameters["inner_grid"])
        _, _, _, result = _saddle(config)
        report.results["linkage"] = {
            "hopf": hopf_value,
            "saddle": result.value,
            "difference": hopf_value - result.value,
        }


def _simulate(config):
    parameters = config.parameters
    return estimate_free_energy(
        config.model,
        parameters["n"],
        parameters["replications"],
        config.seed,
        threads=config.threads,
    )


def run_simulate(config, report, output_directory):
    estimate = _simulate(config)
    write_csv(estimate.to_frame(), output_directory, "simulation.csv", report.artifacts)

    report.results["estimate"] = estimate.to_dict()
    report.results["mutual_information"] = _information(
        estimate.mean, config.model, estimate.n
    )

    if config.parameters["monotone_check"]:
        report.diagnostics["monotone_information"] = monotone_information_check(
            config.model,
            estimate.n,
            estimate.replications,
            config.seed,
            threads=config.threads,
        )


def run_compare(config, report, output_directory):
    _, _, _, result = _saddle(config)
    estimate = _simulate(config)
    write_csv(estimate.to_frame(), output_directory, "simulation.csv", report.artifacts)

    report.results["saddle"] = {
        "value": result.value,
        "method": result.method,
        "residual": result.residual,
        "mutual_information": _information(result.value, config.model),
    }
    report.results["estimate"] = estimate.to_dict()
    report.results["comparison"] = compare_with_limit(
        estimate, result.value, config.parameters["slack"]
    )
    report.diagnostics["saddle"] = result.diagnostics


TASK_RUNNERS = {
    "rho": run_rho,
    "psi-table": run_psi_table,
    "saddle": run_saddle,
    "hopf-check": run_hopf_check,
    "simulate": run_simulate,
    "compare": run_compare,
}


def run_config(config):
    """Execute a validated ``RunConfig`` and write its artifacts.

    Returns
    -------
    RunReport
    """
    output_directory = pathlib.Path(config.output)
    output_directory.mkdir(parents=True, exist_ok=True)

    report = RunReport(config=config.to_dict(), task=config.task)
    logging.info("Running task %s into %s", config.task, output_directory)

    start = time.perf_counter()
    TASK_RUNNERS[config.task](config, report, output_directory)
    report.wall_time = time.perf_counter() - start

    report.write(output_directory)

    return report


def run(config_path, overrides=(), seed=None, output=None, threads=None):
    """Load, validate and execute a run configuration file."""
    config = load_config(config_path, overrides, seed=seed, output=output, threads=threads)
    return run_config(config)
