"""Unit tests for the variance bounds and conditional moments."""

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from poissonnet.core.model import HyperParams, SufficientStats, sample_network
from poissonnet.core.solver import centralized_ml_batch
from poissonnet.exceptions import (
    DegenerateDataError,
    DimensionMismatchError,
    DomainError,
    InvalidSampleSizesError,
)
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
    adhoc_transient_moments,
    eb_asymptotic_moments,
    exact_conditional_mean_included,
    rmse,
    theory_report,
)


@pytest.fixture
def inputs(hp) -> TheoryInputs:
    """Node 4 of [50, 50, 1, 1] pinned at the prior mode."""
    return TheoryInputs(hp=hp, sample_sizes=(50, 50, 1, 1), target_node=4, lambda_j=9.0)


# =============================================================================
# Bounds
# =============================================================================


class TestBounds:
    """Tests for crb, var_bhom and the transient variance."""

    def test_crb_value(self, hp):
        """CRB = (b/a) / sum n_i/(n_i b + 1)."""
        expected = 0.1 / (2 * 50 / 51 + 2 * 0.5)
        assert crb(hp, [50, 50, 1, 1]) == pytest.approx(expected)

    def test_var_bhom_value(self, hp):
        """var = b/(a n) + b^2 sum n_i^2 / (a n^2)."""
        n = 102
        expected = 1 / (10 * n) + (2 * 2500 + 2) / (10 * n**2)
        assert var_bhom(hp, [50, 50, 1, 1]) == pytest.approx(expected)

    def test_equal_for_homogeneous_sizes(self):
        """With equal sample sizes the homogeneous estimator attains the CRB."""
        hp = HyperParams(a=3.0, b=2.0)
        assert var_bhom(hp, [7] * 9) == pytest.approx(crb(hp, [7] * 9))

    @settings(max_examples=60, deadline=None)
    @given(
        sizes=st.lists(st.integers(min_value=1, max_value=200), min_size=1, max_size=30),
        a=st.floats(min_value=0.5, max_value=50.0),
        b=st.floats(min_value=0.05, max_value=20.0),
    )
    def test_crb_below_var_bhom(self, sizes, a, b):
        """No sample-size profile beats the CRB."""
        hp = HyperParams(a=a, b=b)
        assert crb(hp, sizes) <= var_bhom(hp, sizes) * (1 + 1e-12)

    @settings(max_examples=40, deadline=None)
    @given(
        sizes=st.lists(st.integers(min_value=1, max_value=50), min_size=1, max_size=30),
    )
    def test_crb_below_asymptote(self, sizes):
        """(b/a)(n_max b + 1)/N bounds the CRB from above."""
        hp = HyperParams(a=10.0, b=1.0)
        assert crb(hp, sizes) <= crb_asymptote(hp, max(sizes), len(sizes)) * (1 + 1e-12)

    def test_crb_below_ml_sample_variance(self, hp):
        """Across 4000 trials the ML variance is at least the CRB minus 3 standard errors."""
        sizes = [50] * 10 + [1] * 10
        stats = SufficientStats.stack([sample_network(hp, sizes, seed=s) for s in range(4000)])
        b_ml = centralized_ml_batch(stats, hp.a)
        centred = b_ml - b_ml.mean()
        variance = float(np.mean(centred**2))
        se_var = math.sqrt((np.mean(centred**4) - variance**2) / b_ml.size)
        assert variance >= crb(hp, sizes) - 3 * se_var

    def test_asymptote_needs_nodes(self, hp):
        """N must be positive."""
        with pytest.raises(DomainError):
            crb_asymptote(hp, 5, 0)

    @pytest.mark.parametrize("sizes", [[], [3, 0], [[1, 2]]])
    def test_invalid_sizes(self, hp, sizes):
        """Sample sizes are a non-empty vector of values >= 1."""
        with pytest.raises(InvalidSampleSizesError):
            var_bhom(hp, sizes)

    def test_transient_starts_local(self, hp):
        """At t = 0 the row is e_j and the variance is that of node j alone."""
        row = np.array([0.0, 0.0, 1.0, 0.0])
        expected = 1 / 10 + 1 / 10
        assert var_bhom_transient(hp, [50, 50, 1, 1], row) == pytest.approx(expected)

    def test_transient_reaches_steady_state(self, hp):
        """A flat row reproduces the steady-state variance."""
        row = np.full(4, 0.3)
        assert var_bhom_transient(hp, [50, 50, 1, 1], row) == pytest.approx(
            var_bhom(hp, [50, 50, 1, 1])
        )

    def test_transient_stack(self, hp):
        """Stacked rows give one value per row."""
        rows = np.array([[1.0, 0.0, 0.0, 0.0], [0.25, 0.25, 0.25, 0.25]])
        values = var_bhom_transient(hp, [50, 50, 1, 1], rows)
        assert values.shape == (2,)
        assert values[1] == pytest.approx(var_bhom(hp, [50, 50, 1, 1]))

    def test_transient_errors(self, hp):
        """Rows must match the sizes and carry some mass."""
        with pytest.raises(DimensionMismatchError):
            var_bhom_transient(hp, [1, 2], np.ones(3))
        with pytest.raises(DegenerateDataError):
            var_bhom_transient(hp, [1, 2], np.zeros(2))

    def test_bound_value(self, hp):
        """b (1 + 2 b n_max) / (mu a) delta."""
        assert var_bhom_bound(hp, 50, 0.5, 0.01) == pytest.approx(101 / 5 * 0.01)
        np.testing.assert_allclose(var_bhom_bound(hp, 1, 1.0, np.array([0.0, 1.0])), [0.0, 0.3])

    @pytest.mark.parametrize(("mu", "delta"), [(0.0, 0.5), (-1.0, 0.5), (1.0, 1.5), (1.0, -0.1)])
    def test_bound_domain(self, hp, mu, delta):
        """mu must be positive and delta must lie in [0, 1]."""
        with pytest.raises(DomainError):
            var_bhom_bound(hp, 10, mu, delta)


# =============================================================================
# Moments
# =============================================================================


class TestMoments:
    """Tests for the conditional moments of the rate estimators."""

    def test_eb_moments(self, inputs):
        """Mean b/(1+nb)(a + n lambda) and variance (b/(1+nb))^2 n lambda."""
        m = eb_asymptotic_moments(inputs)
        assert m.mean == pytest.approx(0.5 * 19.0)
        assert m.var == pytest.approx(0.25 * 9.0)

    def test_adhoc_with_exact_b_matches_eb(self, inputs):
        """With no uncertainty in b_hat the ad-hoc moments equal the EB moments."""
        eb = eb_asymptotic_moments(inputs)
        adhoc = adhoc_transient_moments(inputs, 0.0)
        assert adhoc.mean == pytest.approx(eb.mean, rel=1e-15)
        assert adhoc.var == pytest.approx(eb.var, rel=1e-15)

    def test_adhoc_variance_grows_with_var_b(self, inputs):
        """A noisier hyperparameter estimate cannot lower the predicted RMSE."""
        low = adhoc_transient_moments(inputs, 0.001).rmse(inputs.lambda_j)
        high = adhoc_transient_moments(inputs, 0.1).rmse(inputs.lambda_j)
        assert high > low

    def test_adhoc_formula(self, inputs):
        """Second-order mean and first-order variance."""
        var_b = 0.02
        x = 0.5 - 1 / 8 * var_b
        y = 19.0
        slope = 2 / 8
        m = adhoc_transient_moments(inputs, var_b)
        assert m.mean == pytest.approx(x * y)
        assert m.var == pytest.approx(x**2 * 9.0 + slope**2 * var_b * (y**2 + 9.0))

    def test_negative_var_b(self, inputs):
        """var_b must be non-negative."""
        with pytest.raises(DomainError):
            adhoc_transient_moments(inputs, -1e-3)

    def test_rmse_identity(self):
        """rmse = sqrt(var + bias^2)."""
        assert rmse(1.0, 9.0, 5.0) == pytest.approx(5.0)
        assert Moments(mean=2.0, var=0.0).rmse(2.0) == 0.0
        with pytest.raises(DomainError):
            rmse(0.0, -1.0, 0.0)

    def test_included_mean(self, inputs):
        """b - (phi_jj n_j / eta_j)(b - lambda_j / a)."""
        mean = exact_conditional_mean_included(inputs, 0.5, 2.0)
        assert mean == pytest.approx(1.0 - 0.25 * (1.0 - 0.9))
        assert exact_conditional_mean_included(inputs, 0.0, 2.0) == 1.0
        with pytest.raises(DomainError):
            exact_conditional_mean_included(inputs, 0.5, 0.0)

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"sample_sizes": ()},
            {"sample_sizes": (1, 0)},
            {"target_node": 0},
            {"target_node": 5},
            {"lambda_j": 0.0},
        ],
    )
    def test_invalid_inputs(self, hp, kwargs):
        """TheoryInputs validates its fields."""
        base = {"hp": hp, "sample_sizes": (50, 50, 1, 1), "target_node": 4, "lambda_j": 9.0}
        base.update(kwargs)
        with pytest.raises((DomainError, InvalidSampleSizesError)):
            TheoryInputs(**base)


# =============================================================================
# Report
# =============================================================================


class TestTheoryReport:
    """Tests for theory_report."""

    def test_steady_state(self, inputs, hp):
        """Without rows the report carries the steady-state predictions only."""
        report = theory_report(inputs)
        assert report.crb == pytest.approx(crb(hp, inputs.sample_sizes))
        assert report.var_bhom == pytest.approx(var_bhom(hp, inputs.sample_sizes))
        assert report.rmse_dec == pytest.approx(3.0)
        assert report.times == ()
        assert report.adhoc_t == ()
        assert report.normalized_eb == pytest.approx(report.rmse_eb / 3.0)
        assert report.rmse_adhoc >= report.rmse_eb

    def test_transient_rows(self, inputs, hp):
        """Each row gives one variance and one set of moments."""
        rows = [np.eye(4)[3], np.full(4, 0.25)]
        report = theory_report(inputs, rows, times=[0, 50])
        assert report.times == (0, 50)
        assert report.var_bhom_t[0] == pytest.approx(0.2)
        assert report.var_bhom_t[1] == pytest.approx(report.var_bhom)
        assert report.adhoc_t[1] == adhoc_transient_moments(inputs, report.var_bhom_t[1])

    def test_default_times(self, inputs):
        """Times default to 0, 1, ..."""
        report = theory_report(inputs, [np.eye(4)[3]] * 3)
        assert report.times == (0, 1, 2)

    def test_included_shifts_mean(self, hp):
        """Including the target's counts moves the steady-state mean toward lambda_j / a."""
        base = {"hp": hp, "sample_sizes": (50, 50, 1, 1), "target_node": 4, "lambda_j": 2.0}
        excluded = theory_report(TheoryInputs(**base))
        included = theory_report(TheoryInputs(**base, participation=Participation.INCLUDED))
        b_shift = 1.0 - (1 / 102) * (1.0 - 0.2)
        expected = adhoc_transient_moments(included.inputs, included.var_bhom, b_shift)
        assert included.adhoc.mean == pytest.approx(expected.mean)
        assert included.adhoc.mean != excluded.adhoc.mean
        assert included.adhoc.var == pytest.approx(excluded.adhoc.var)
        assert math.isclose(included.rmse_eb, excluded.rmse_eb)

    def test_participation_str(self):
        """Participation renders as its value."""
        assert str(Participation.INCLUDED) == "included"
