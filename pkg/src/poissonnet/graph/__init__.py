"""Communication schedules, push-sum weights and transition tracking."""

from __future__ import annotations

from poissonnet.graph.connectivity import (
    ConnectivityReport,
    min_joint_window,
    verify_joint_connectivity,
)
from poissonnet.graph.schedule import (
    Edge,
    EdgeSet,
    GraphSchedule,
    ScheduleKind,
    WeightMatrix,
    edges_at,
    format_scripted,
    load_scripted_schedule,
    parse_scripted,
    push_sum_weights,
    weight_sequence,
    weights_at,
    write_scripted_schedule,
)
from poissonnet.graph.tracker import (
    TransitionTracker,
    ergodicity_coefficient,
    tracker_init,
    tracker_step,
)

__all__ = [
    "ConnectivityReport",
    "Edge",
    "EdgeSet",
    "GraphSchedule",
    "ScheduleKind",
    "TransitionTracker",
    "WeightMatrix",
    "edges_at",
    "ergodicity_coefficient",
    "format_scripted",
    "load_scripted_schedule",
    "min_joint_window",
    "parse_scripted",
    "push_sum_weights",
    "tracker_init",
    "tracker_step",
    "verify_joint_connectivity",
    "weight_sequence",
    "weights_at",
    "write_scripted_schedule",
]
