"""Gauged Hausdorff measure experiments for entire transcendental dynamics."""

from ._core import (
    ConvergenceError,
    DomainError,
    ExpParams,
    Family,
    Gauge,
    IllConditionedError,
    InsufficientDataError,
    IoError,
    MLParams,
    PreconditionError,
    besicovitch_cover,
    cli,
    escape_scan,
    expansion_bound_check,
    gamma_thresholds,
    gauge_equivalence_ratio,
    koebe_derivative_bounds,
    koenigs_coefficients,
    mcmullen_log_product,
    ml_series,
    ml_series_log,
    mobius_distortion_on_disk,
    order_estimate,
    run_suite,
    solve_fixed_points,
    tract_scan,
)

__all__ = [name for name in dir() if not name.startswith("_")]
