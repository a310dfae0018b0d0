"""Constrained mixed-variable efficient global optimization."""

from ._core import (
    ConditioningError,
    ConfigError,
    DomainError,
    GaussianProcess,
    KernelKind,
    KernelSpec,
    MixedPoint,
    MixedSpace,
    Problem,
    TrainingError,
    benchmarks,
    default_config,
    expected_improvement,
    gower_distance,
    gram,
    hyperparameter_count,
    kernel,
    lhs_initial_doe,
    make_problem,
    oracle,
    probability_of_feasibility,
    run_campaign,
    run_categorywise_ego,
    run_mixed_ego,
    run_penalized_ga,
    summarize,
)

__all__ = [name for name in dir() if not name.startswith("_")]
