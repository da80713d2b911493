"""Python bindings for the aniso_opt C++ core.

Problems are built from the same JSON specs the CLI config uses, e.g.
``problem({"problem": "sym_mf", "random": {"n": 2, "seed": 3}})``.
"""

import json

from . import _core
from ._core import (
    ConfigError,
    DomainError,
    NondifferentiableError,
    ParameterError,
    Problem,
    SpanningError,
    certify,
    conj_prime,
    conj_second,
    estimate_rho,
    h_lambda,
    h_lambda_eigenvalues,
    kernel_derivative,
    kernel_names,
    kernel_value,
    octopus_escape_threshold,
    precondition,
    precondition_jacobian,
    run_clipped,
    run_gd,
    run_pgd,
    sample_ball,
    second_order_char,
)

__all__ = [
    "ConfigError",
    "DomainError",
    "NondifferentiableError",
    "ParameterError",
    "Problem",
    "SpanningError",
    "certify",
    "conj_prime",
    "conj_second",
    "derive_params",
    "estimate_rho",
    "h_lambda",
    "h_lambda_eigenvalues",
    "kernel_derivative",
    "kernel_names",
    "kernel_value",
    "octopus_escape_threshold",
    "precondition",
    "precondition_jacobian",
    "problem",
    "run_clipped",
    "run_command",
    "run_gd",
    "run_perturbed_pgd",
    "run_pgd",
    "sample_ball",
    "second_order_char",
    "validate_config",
]


def problem(spec):
    """Build a Problem from a dict (or JSON string) in the config's problem format."""
    return _core._build_problem(spec if isinstance(spec, str) else json.dumps(spec))


def derive_params(L, Lbar, rho, eps, delta, delta_f, n, c=2.0**-39):
    """Perturbation schedule as a dict (gamma, lambda, radius_r, time_T, tol_G, ...)."""
    return json.loads(_core._derive_params(L, Lbar, rho, eps, delta, delta_f, n, c))


def run_perturbed_pgd(problem, kernel, x0, schedule, max_iters=1000, target=None, seed=0, record_path=False):
    """schedule is a dict: either explicit fields or {"derive": {...}} as in the config."""
    return _core.run_perturbed_pgd(problem, kernel, x0, json.dumps(schedule), max_iters, target, seed, record_path)


def validate_config(config):
    """Raise ConfigError (with the line number in the message) if the config is invalid."""
    _core._validate_config(config if isinstance(config, str) else json.dumps(config, indent=2))


def run_command(command, config, out_dir, threads=0):
    """Same as `aniso-opt <command>`; returns the summary as a dict."""
    text = config if isinstance(config, str) else json.dumps(config, indent=2)
    return json.loads(_core._run_command(command, text, str(out_dir), threads))
