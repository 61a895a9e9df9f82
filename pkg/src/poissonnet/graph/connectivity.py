"""Uniform joint strong connectivity checks over schedule windows."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import networkx as nx

from poissonnet.exceptions import DomainError
from poissonnet.graph.schedule import Edge, GraphSchedule, edges_at

logger = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class ConnectivityReport:
    """Outcome of a joint-connectivity check.

    Attributes:
        connected: True if every checked window union is strongly connected
        Q: Window length
        horizon: Number of slots covered
        windows_checked: Number of windows examined before stopping
        failing_window: Index t of the first window [tQ, (t+1)Q) that is
            not strongly connected, or None
    """

    connected: bool
    Q: int
    horizon: int
    windows_checked: int
    failing_window: int | None = None

    def __bool__(self) -> bool:
        return self.connected


def window_union(sched: GraphSchedule, start: int, length: int) -> set[Edge]:
    """Union of E(t) over t in [start, start + length)."""
    union: set[Edge] = set()
    for t in range(start, start + length):
        union |= edges_at(sched, t)
    return union


def is_strongly_connected(N: int, edges: set[Edge]) -> bool:
    graph = nx.DiGraph()
    graph.add_nodes_from(range(1, N + 1))
    graph.add_edges_from(edges)
    return bool(nx.is_strongly_connected(graph))


def verify_joint_connectivity(sched: GraphSchedule, Q: int, horizon: int) -> ConnectivityReport:
    """Check that every full window [tQ, (t+1)Q) within the horizon is strongly connected.

    Args:
        sched: Schedule to check
        Q: Window length
        horizon: Number of slots to cover; a trailing partial window is ignored

    Returns:
        ConnectivityReport with the first failing window, if any

    Raises:
        DomainError: If Q < 1 or horizon < Q
    """
    if Q < 1:
        raise DomainError("Q", Q, "Q >= 1")
    if horizon < Q:
        raise DomainError("horizon", horizon, f"horizon >= Q={Q}")

    n_windows = horizon // Q
    for window in range(n_windows):
        if not is_strongly_connected(sched.N, window_union(sched, window * Q, Q)):
            logger.debug("Window %d of length %d is not strongly connected", window, Q)
            return ConnectivityReport(
                connected=False,
                Q=Q,
                horizon=horizon,
                windows_checked=window + 1,
                failing_window=window,
            )
    return ConnectivityReport(connected=True, Q=Q, horizon=horizon, windows_checked=n_windows)


def min_joint_window(sched: GraphSchedule, horizon: int, q_max: int | None = None) -> int | None:
    """Smallest Q for which ``verify_joint_connectivity`` passes over the horizon.

    Returns:
        The smallest passing Q, or None if no Q up to ``q_max`` (default:
        the horizon) passes
    """
    upper = min(q_max or horizon, horizon)
    for Q in range(1, upper + 1):
        if verify_joint_connectivity(sched, Q, horizon).connected:
            logger.info("Schedule is jointly strongly connected with Q=%d", Q)
            return Q
    return None
