"""Conditional moments of the rate estimators at a target node j.

The Taylor forms here are approximations: second order for means, first
order for variances. Conditioning is on the target's true rate lambda_j.
By default node j is treated as excluded from the hyperparameter estimate
(its counts are independent of b_hat); the included mode shifts the mean
of b_hat_j by the exact participation correction.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from poissonnet.core.model import FloatArray, HyperParams
from poissonnet.exceptions import DomainError, InvalidSampleSizesError
from poissonnet.theory.bounds import crb, var_bhom, var_bhom_transient


class Participation(Enum):
    """Whether the target node's own counts enter the hyperparameter estimate."""

    EXCLUDED = "excluded"
    INCLUDED = "included"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True, slots=True)
class TheoryInputs:
    """Inputs of the closed-form performance predictions.

    Attributes:
        hp: Prior hyperparameters (the ground truth b)
        sample_sizes: n_i for every node
        target_node: 1-based id j of the analysed node
        lambda_j: Conditioning value of the target's rate
        participation: Conditioning model for the target node
    """

    hp: HyperParams
    sample_sizes: tuple[int, ...]
    target_node: int
    lambda_j: float
    participation: Participation = Participation.EXCLUDED

    def __post_init__(self) -> None:
        if not self.sample_sizes or min(self.sample_sizes) < 1:
            raise InvalidSampleSizesError("sample sizes must be non-empty and >= 1")
        if not 1 <= self.target_node <= len(self.sample_sizes):
            N = len(self.sample_sizes)
            raise DomainError("target_node", self.target_node, f"1 <= j <= {N}")
        if not self.lambda_j > 0:
            raise DomainError("lambda_j", self.lambda_j, "lambda_j > 0")

    @property
    def n_j(self) -> int:
        return self.sample_sizes[self.target_node - 1]

    @property
    def n_total(self) -> int:
        return sum(self.sample_sizes)


@dataclass(frozen=True, slots=True)
class Moments:
    """Approximate conditional mean and variance of an estimator."""

    mean: float
    var: float

    def rmse(self, truth: float) -> float:
        return rmse(self.mean, self.var, truth)


@dataclass(frozen=True, slots=True)
class TheoryReport:
    """Closed-form predictions for one configuration.

    Attributes:
        inputs: The inputs the report was computed from
        crb: Cramer-Rao bound on b
        var_bhom: Steady-state variance of the homogeneous estimate
        eb: Asymptotic moments of the EB rate estimate at node j
        adhoc: Steady-state moments of the ad-hoc rate estimate at node j
        rmse_dec: RMSE of the local sample mean, sqrt(lambda_j / n_j)
        times: Rounds of the transient predictions (empty if not requested)
        var_bhom_t: Variance of b_hom_j(t) at each round in ``times``
        adhoc_t: Moments of the ad-hoc rate estimate at each round in ``times``
    """

    inputs: TheoryInputs
    crb: float
    var_bhom: float
    eb: Moments
    adhoc: Moments
    rmse_dec: float
    times: tuple[int, ...] = ()
    var_bhom_t: tuple[float, ...] = field(default=())
    adhoc_t: tuple[Moments, ...] = field(default=())

    @property
    def rmse_eb(self) -> float:
        return self.eb.rmse(self.inputs.lambda_j)

    @property
    def rmse_adhoc(self) -> float:
        return self.adhoc.rmse(self.inputs.lambda_j)

    @property
    def normalized_eb(self) -> float:
        return self.rmse_eb / self.rmse_dec

    @property
    def normalized_adhoc(self) -> float:
        return self.rmse_adhoc / self.rmse_dec


# =============================================================================
# Closed forms
# =============================================================================


def eb_asymptotic_moments(inputs: TheoryInputs) -> Moments:
    """Asymptotic mean b/(1+n_j b)(a + n_j lambda_j) and variance (b/(1+n_j b))^2 n_j lambda_j."""
    a, b = inputs.hp.a, inputs.hp.b
    n, lam = inputs.n_j, inputs.lambda_j
    x = b / (1.0 + n * b)
    y = a + n * lam
    return Moments(mean=x * y, var=x**2 * (n * lam))


def adhoc_transient_moments(
    inputs: TheoryInputs, var_b: float, b_mean: float | None = None
) -> Moments:
    """Moments of the ad-hoc rate estimate given VAR[b_hom_j(t)] = var_b.

    Args:
        inputs: Theory inputs
        var_b: Variance of the hyperparameter estimate at node j
        b_mean: Conditional mean of that estimate; defaults to b (excluded
            node). Only the mean prediction uses it.

    Raises:
        DomainError: If var_b < 0
    """
    if var_b < 0:
        raise DomainError("var_b", var_b, "var_b >= 0")
    a, b = inputs.hp.a, inputs.hp.b
    n, lam = inputs.n_j, inputs.lambda_j
    m = b if b_mean is None else b_mean
    curvature = n / (1.0 + n * m) ** 3
    x = m / (1.0 + n * m) - curvature * var_b
    x_var = b / (1.0 + n * b) - n / (1.0 + n * b) ** 3 * var_b
    y = a + n * lam
    slope = 2.0 * n / (1.0 + n * b) ** 3
    return Moments(mean=x * y, var=x_var**2 * (n * lam) + slope**2 * var_b * (y**2 + n * lam))


def exact_conditional_mean_included(inputs: TheoryInputs, phi_jj: float, eta_j: float) -> float:
    """Mean of b_hom_j(t) given lambda_j when node j's counts are mixed in.

    Returns b - (phi_jj n_j / eta_j)(b - lambda_j / a).

    Raises:
        DomainError: If eta_j <= 0
    """
    if not eta_j > 0:
        raise DomainError("eta_j", eta_j, "eta_j > 0")
    b = inputs.hp.b
    return b - (phi_jj * inputs.n_j / eta_j) * (b - inputs.lambda_j / inputs.hp.a)


def rmse(mean: float, var: float, truth: float) -> float:
    """sqrt(var + (mean - truth)^2).

    Raises:
        DomainError: If var < 0
    """
    if var < 0:
        raise DomainError("var", var, "var >= 0")
    return math.sqrt(var + (mean - truth) ** 2)


# =============================================================================
# Report
# =============================================================================


def theory_report(
    inputs: TheoryInputs,
    phi_rows: Sequence[FloatArray] | None = None,
    times: Sequence[int] | None = None,
) -> TheoryReport:
    """Assemble every closed-form prediction for one configuration.

    Args:
        inputs: Theory inputs
        phi_rows: Optional rows j of Phi(t) for the transient predictions
        times: Rounds matching ``phi_rows`` (defaults to 0, 1, ...)

    Returns:
        The TheoryReport
    """
    sizes = inputs.sample_sizes
    v_ss = var_bhom(inputs.hp, sizes)
    steady_mean = None
    if inputs.participation is Participation.INCLUDED:
        steady_mean = exact_conditional_mean_included(inputs, 1.0, float(inputs.n_total))

    report_times: tuple[int, ...] = ()
    var_t: tuple[float, ...] = ()
    adhoc_t: tuple[Moments, ...] = ()
    if phi_rows is not None:
        rows = np.asarray(phi_rows, dtype=np.float64)
        report_times = tuple(times) if times is not None else tuple(range(len(rows)))
        var_t = tuple(float(v) for v in np.atleast_1d(var_bhom_transient(inputs.hp, sizes, rows)))
        n = np.asarray(sizes, dtype=np.float64)
        moments: list[Moments] = []
        for row, v in zip(rows, var_t, strict=True):
            b_mean = None
            if inputs.participation is Participation.INCLUDED:
                j = inputs.target_node - 1
                b_mean = exact_conditional_mean_included(inputs, float(row[j]), float(row @ n))
            moments.append(adhoc_transient_moments(inputs, v, b_mean))
        adhoc_t = tuple(moments)

    return TheoryReport(
        inputs=inputs,
        crb=crb(inputs.hp, sizes),
        var_bhom=v_ss,
        eb=eb_asymptotic_moments(inputs),
        adhoc=adhoc_transient_moments(inputs, v_ss, steady_mean),
        rmse_dec=math.sqrt(inputs.lambda_j / inputs.n_j),
        times=report_times,
        var_bhom_t=var_t,
        adhoc_t=adhoc_t,
    )
