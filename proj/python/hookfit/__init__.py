"""Fit and compare discrete power law, hooked power law and lognormal models
for citation-style count data."""

from ._hookfit import (
    DEFAULT_SEED,
    ConsistencyError,
    DegenerateDataError,
    Distribution,
    EmptyDataError,
    EmptyTailError,
    HookfitError,
    IoError,
    ParameterError,
    ParseError,
    SupportError,
    UsageError,
    analyze,
    attachment_to_hooked,
    ci_width_study,
    compare,
    fit,
    hooked_to_attachment,
    ll_contour,
    load_counts,
    lognormal_ci_study,
    ridge_demo,
    scan_x_min,
    slope_tolerance_threshold,
)

__all__ = [
    "DEFAULT_SEED",
    "ConsistencyError",
    "DegenerateDataError",
    "Distribution",
    "EmptyDataError",
    "EmptyTailError",
    "HookfitError",
    "IoError",
    "ParameterError",
    "ParseError",
    "SupportError",
    "UsageError",
    "analyze",
    "attachment_to_hooked",
    "ci_width_study",
    "compare",
    "fit",
    "hooked_to_attachment",
    "ll_contour",
    "load_counts",
    "lognormal_ci_study",
    "ridge_demo",
    "scan_x_min",
    "slope_tolerance_threshold",
]
