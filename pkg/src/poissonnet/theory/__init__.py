"""Closed-form performance theory: bounds, variances and conditional moments."""

from __future__ import annotations

from poissonnet.theory.bounds import (
    crb,
    crb_asymptote,
    var_bhom,
    var_bhom_bound,
    var_bhom_transient,
)
from poissonnet.theory.moments import (
    Moments,
    Participation,
    TheoryInputs,
    TheoryReport,
    adhoc_transient_moments,
    eb_asymptotic_moments,
    exact_conditional_mean_included,
    rmse,
    theory_report,
)

__all__ = [
    "Moments",
    "Participation",
    "TheoryInputs",
    "TheoryReport",
    "adhoc_transient_moments",
    "crb",
    "crb_asymptote",
    "eb_asymptotic_moments",
    "exact_conditional_mean_included",
    "rmse",
    "theory_report",
    "var_bhom",
    "var_bhom_bound",
    "var_bhom_transient",
]
