"""Unit tests for the ad-hoc push-sum estimator and readouts."""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from poissonnet.core.model import (
    HyperParams,
    SufficientStats,
    homogeneous_estimate,
    sample_network,
    shrinkage,
)
from poissonnet.estimators.adhoc import adhoc_init, adhoc_limit, adhoc_run, adhoc_step
from poissonnet.estimators.readout import Readout, consensus_residual
from poissonnet.exceptions import DegenerateDataError, DimensionMismatchError, DomainError
from poissonnet.graph.schedule import GraphSchedule, weight_sequence, weights_at


class TestReadout:
    """Tests for the readout policy."""

    def test_default_records_everything(self):
        """Without options every node and round is recorded."""
        readout = Readout()
        assert all(readout.wants(t, 5) for t in range(6))
        np.testing.assert_array_equal(readout.indices(3), [0, 1, 2])

    def test_stride_keeps_last_round(self):
        """Strided readout always keeps t = 0 and t = T."""
        readout = Readout(stride=4)
        assert [t for t in range(11) if readout.wants(t, 10)] == [0, 4, 8, 10]

    def test_final_only(self):
        """final_only records the endpoints."""
        readout = Readout(final_only=True)
        assert [t for t in range(6) if readout.wants(t, 5)] == [0, 5]

    def test_node_selection(self):
        """Nodes are 1-based."""
        np.testing.assert_array_equal(Readout(nodes=(2, 4)).indices(4), [1, 3])

    def test_node_out_of_range(self):
        """Recorded nodes must exist."""
        with pytest.raises(DomainError):
            Readout(nodes=(5,)).indices(4)

    def test_invalid_stride(self):
        """stride must be positive."""
        with pytest.raises(DomainError):
            Readout(stride=0)

    def test_consensus_residual(self):
        """Residual is the spread over the node axis."""
        assert consensus_residual(np.array([1.0, 3.0, 2.5])) == 2.0
        np.testing.assert_allclose(
            consensus_residual(np.array([[1.0, 0.0], [2.0, 0.5]])), [1.0, 0.5]
        )


class TestAdHocInit:
    """Tests for adhoc_init."""

    def test_initial_state(self, handmade_network):
        """s(0) = sigma, eta(0) = n, and b_hat starts at the guarded local estimate."""
        st0 = adhoc_init(handmade_network, 10.0)
        np.testing.assert_array_equal(st0.s, [12.0, 3.0, 0.0])
        np.testing.assert_array_equal(st0.eta, [4.0, 1.0, 2.0])
        np.testing.assert_allclose(st0.b_hat, [12 / 40, 3 / 10, 1 / 20])
        assert st0.t == 0

    def test_excluded_node(self, handmade_network):
        """An excluded node pushes no mass and borrows the next node's estimate."""
        st0 = adhoc_init(handmade_network, 10.0, excluded=2)
        assert st0.s[1] == 0.0
        assert st0.eta[1] == 0.0
        assert st0.b_hat[1] == st0.b_hat[2]
        assert st0.excluded == 2

    def test_excluded_last_node_wraps(self, handmade_network):
        """The last node borrows from node 1."""
        st0 = adhoc_init(handmade_network, 10.0, excluded=3)
        assert st0.b_hat[2] == st0.b_hat[0]

    def test_excluded_out_of_range(self, handmade_network):
        """Excluded node ids must exist."""
        with pytest.raises(DomainError):
            adhoc_init(handmade_network, 10.0, excluded=4)


class TestAdHocRun:
    """Tests for adhoc_step and adhoc_run."""

    def test_complete_graph_one_round(self, small_network, hp):
        """On a complete graph every node reads sigma / (a n) after one round."""
        trace = adhoc_run(small_network, GraphSchedule.complete(4), hp.a, 1)
        b_hom = homogeneous_estimate(small_network, hp.a)
        np.testing.assert_allclose(trace.final.b_hat, b_hom, rtol=1e-12)

    def test_consensus_on_unbalanced_cycle(self, split_network, unbalanced_cycle, hp):
        """After 2000 rounds every node is within 1e-8 of sigma / (a n)."""
        trace = adhoc_run(split_network, unbalanced_cycle, hp.a, 2000, Readout(final_only=True))
        b_hom = homogeneous_estimate(split_network, hp.a)
        assert np.max(np.abs(trace.final.b_hat - b_hom)) < 1e-8
        assert trace.times == [0, 2000]

    def test_error_decays_exponentially(self, split_network, unbalanced_cycle, hp):
        """log max_i |b_i(t) - b_hom| falls linearly in t on the fixed digraph."""
        trace = adhoc_run(split_network, unbalanced_cycle, hp.a, 1500)
        b_hom = homogeneous_estimate(split_network, hp.a)
        error = np.max(np.abs(trace.b_hat_array() - b_hom), axis=1)
        t = np.asarray(trace.times)
        keep = (t >= 50) & (error > 1e-12)
        assert keep.sum() > 100

        log_error = np.log(error[keep])
        slope, intercept = np.polyfit(t[keep], log_error, 1)
        fitted = slope * t[keep] + intercept
        r_squared = 1.0 - np.sum((log_error - fitted) ** 2) / np.sum(
            (log_error - log_error.mean()) ** 2
        )
        assert slope < 0
        assert r_squared > 0.9

    def test_limit_matches_long_run(self, split_network, unbalanced_cycle, hp):
        """Rate readouts converge to the closed-form limit."""
        trace = adhoc_run(split_network, unbalanced_cycle, hp.a, 2000, Readout(final_only=True))
        b_hom, lam = adhoc_limit(split_network, hp.a)
        assert float(b_hom) == pytest.approx(homogeneous_estimate(split_network, hp.a))
        np.testing.assert_allclose(trace.final.lambda_hat, lam, rtol=1e-7)

    def test_limit_formula(self, handmade_network):
        """lambda_i = sigma / (a n + sigma n_i) (a + sigma_i)."""
        _, lam = adhoc_limit(handmade_network, 10.0)
        expected = [15 / (70 + 15 * n_i) * (10 + s_i) for n_i, s_i in [(4, 12), (1, 3), (2, 0)]]
        np.testing.assert_allclose(lam, expected)

    def test_limit_degenerate(self):
        """A network without arrivals has no limit in the open domain."""
        stats = SufficientStats(n=np.array([1.0, 2.0]), sigma=np.array([0.0, 0.0]))
        with pytest.raises(DegenerateDataError):
            adhoc_limit(stats, 10.0)

    def test_zero_rounds(self, small_network, hp):
        """T = 0 records only the initial state."""
        trace = adhoc_run(small_network, GraphSchedule.cycle(4), hp.a, 0)
        assert trace.times == [0]
        assert trace.final.t == 0

    def test_negative_rounds(self, small_network, hp):
        """T must be non-negative."""
        with pytest.raises(DomainError):
            adhoc_run(small_network, GraphSchedule.cycle(4), hp.a, -1)

    def test_schedule_size_mismatch(self, small_network, hp):
        """Schedule and data must agree on N."""
        with pytest.raises(DimensionMismatchError):
            adhoc_run(small_network, GraphSchedule.cycle(5), hp.a, 3)

    def test_isolated_node_keeps_estimate(self, handmade_network):
        """A node that hears nothing and sends nothing keeps its estimate."""
        sched = GraphSchedule.fixed(3, {(1, 2), (2, 1)})
        trace = adhoc_run(handmade_network, sched, 10.0, 5)
        values = trace.b_hat_array()[:, 2]
        assert np.all(values == values[0])

    def test_readout_uses_shrinkage(self, small_network, hp):
        """lambda_hat is the shrinkage readout of the current b_hat."""
        trace = adhoc_run(small_network, GraphSchedule.cycle(4), hp.a, 3)
        st = trace.final
        expected = shrinkage(st.b_hat, small_network.n, small_network.sigma, hp.a)
        np.testing.assert_allclose(st.lambda_hat, expected)

    def test_rows(self, small_network, hp):
        """rows() yields (trial, t, node, b_hat, lambda_hat) per recorded node."""
        trace = adhoc_run(small_network, GraphSchedule.cycle(4), hp.a, 2, Readout(nodes=(2,)))
        rows = list(trace.rows(trial=0))
        assert [(r[0], r[1], r[2]) for r in rows] == [(0, 0, 2), (0, 1, 2), (0, 2, 2)]

    def test_batch_matches_single_runs(self, hp):
        """Batched trials reproduce the per-trial trajectories."""
        nets = [sample_network(hp, [5, 5, 2, 1], seed=s) for s in range(4)]
        sched = GraphSchedule.unbalanced_cycle(4)
        batch = adhoc_run(SufficientStats.stack(nets), sched, hp.a, 30)
        for j, net in enumerate(nets):
            single = adhoc_run(net, sched, hp.a, 30)
            np.testing.assert_allclose(batch.b_hat_array()[..., j], single.b_hat_array())
            np.testing.assert_allclose(batch.lambda_hat_array()[..., j], single.lambda_hat_array())
        with pytest.raises(DomainError):
            list(batch.rows())

    def test_excluded_node_never_pushes(self, split_network, unbalanced_cycle, hp):
        """With node 20 excluded, the network converges without its counts."""
        trace = adhoc_run(
            split_network, unbalanced_cycle, hp.a, 2000, Readout(final_only=True), excluded=20
        )
        n = split_network.n.copy()
        sigma = split_network.sigma.copy()
        expected = (sigma.sum() - sigma[19]) / (hp.a * (n.sum() - n[19]))
        np.testing.assert_allclose(trace.final.b_hat, expected, rtol=1e-7)


class TestAdHocProperties:
    """Property tests for push-sum mass conservation."""

    @settings(max_examples=40, deadline=None)
    @given(
        sizes=st.lists(st.integers(min_value=1, max_value=20), min_size=2, max_size=10),
        p=st.floats(min_value=0.0, max_value=1.0),
        seed=st.integers(min_value=0, max_value=2**32),
    )
    def test_mass_conservation(self, sizes, p, seed):
        """sum_i s_i(t) = sigma and sum_i eta_i(t) = n at every round."""
        hp = HyperParams(a=5.0, b=2.0)
        net = sample_network(hp, sizes, seed=seed)
        sched = GraphSchedule.erdos_renyi(len(sizes), p, seed=seed)
        st = adhoc_init(net, hp.a)
        for W in weight_sequence(sched, 25):
            st = adhoc_step(st, W, net, hp.a)
            assert st.s.sum() == pytest.approx(net.sigma_total, rel=1e-8, abs=1e-8)
            assert st.eta.sum() == pytest.approx(net.n_total, rel=1e-8)

    def test_step_dimension_mismatch(self, small_network, hp):
        """adhoc_step rejects weights of the wrong size."""
        st = adhoc_init(small_network, hp.a)
        with pytest.raises(DimensionMismatchError):
            adhoc_step(st, weights_at(GraphSchedule.cycle(3), 0), small_network, hp.a)
