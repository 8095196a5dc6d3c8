"""Prediction-correction tracking of time-varying convex programs."""

from ._core import (
    Error,
    bound_report,
    budget_tau,
    contraction_factor,
    example_config,
    example_names,
    hybrid_c_min,
    loglog_slope,
    max_h_for_oh2,
    run,
    run_sweep,
    scalar_problem_constants,
    truncation_bound,
    worst_case_error,
)

__all__ = [
    "Error",
    "bound_report",
    "budget_tau",
    "contraction_factor",
    "example_config",
    "example_names",
    "hybrid_c_min",
    "loglog_slope",
    "max_h_for_oh2",
    "run",
    "run_sweep",
    "scalar_problem_constants",
    "truncation_bound",
    "worst_case_error",
]
