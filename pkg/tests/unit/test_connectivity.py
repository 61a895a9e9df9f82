"""Unit tests for joint-connectivity checks."""

from __future__ import annotations

import pytest

from poissonnet.exceptions import DomainError
from poissonnet.graph.connectivity import (
    is_strongly_connected,
    min_joint_window,
    verify_joint_connectivity,
    window_union,
)
from poissonnet.graph.schedule import GraphSchedule


class TestStrongConnectivity:
    """Tests for is_strongly_connected."""

    def test_cycle(self):
        """A directed cycle is strongly connected."""
        assert is_strongly_connected(3, {(1, 2), (2, 3), (3, 1)})

    def test_path(self):
        """A directed path is not."""
        assert not is_strongly_connected(3, {(1, 2), (2, 3)})

    def test_isolated_node(self):
        """A node without edges breaks connectivity."""
        assert not is_strongly_connected(3, {(1, 2), (2, 1)})

    def test_single_node(self):
        """One node is trivially connected."""
        assert is_strongly_connected(1, set())


class TestJointConnectivity:
    """Tests for verify_joint_connectivity and min_joint_window."""

    def test_window_union(self, alternating_schedule):
        """Unions collect the edges of consecutive slots."""
        assert window_union(alternating_schedule, 0, 2) == {(1, 2), (2, 3), (3, 1)}
        assert window_union(alternating_schedule, 1, 1) == {(3, 1)}

    def test_fixed_cycle_passes_with_unit_window(self, unbalanced_cycle):
        """A strongly connected fixed graph passes every window of length 1."""
        report = verify_joint_connectivity(unbalanced_cycle, 1, 50)
        assert report
        assert report.windows_checked == 50
        assert report.failing_window is None

    def test_split_cycle_needs_two_slots(self, alternating_schedule):
        """No single slot is connected, every pair of slots is."""
        failing = verify_joint_connectivity(alternating_schedule, 1, 10)
        assert not failing
        assert failing.failing_window == 0
        assert failing.windows_checked == 1
        assert verify_joint_connectivity(alternating_schedule, 2, 10).connected

    def test_partial_window_ignored(self, alternating_schedule):
        """A trailing partial window is not checked."""
        report = verify_joint_connectivity(alternating_schedule, 2, 5)
        assert report.windows_checked == 2

    def test_min_joint_window(self, alternating_schedule, unbalanced_cycle):
        """The smallest passing window is reported."""
        assert min_joint_window(alternating_schedule, 20) == 2
        assert min_joint_window(unbalanced_cycle, 20) == 1

    def test_min_joint_window_none(self):
        """A disconnected graph never passes."""
        sched = GraphSchedule.fixed(3, {(1, 2)})
        assert min_joint_window(sched, 12, q_max=4) is None

    def test_sparse_random_graph_needs_long_window(self):
        """A sparse random schedule needs more than one slot."""
        sched = GraphSchedule.erdos_renyi(20, 0.01, seed=4)
        q = min_joint_window(sched, 400)
        assert q is not None
        assert q > 1

    @pytest.mark.parametrize(("Q", "horizon"), [(0, 10), (5, 4)])
    def test_invalid_arguments(self, alternating_schedule, Q, horizon):
        """Q must be positive and fit in the horizon."""
        with pytest.raises(DomainError):
            verify_joint_connectivity(alternating_schedule, Q, horizon)
