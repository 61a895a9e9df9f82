"""Time-varying communication schedules and push-sum weights.

A schedule maps a slot t to a set of directed edges ``(i, k)`` meaning
"monitor i transmits to monitor k" (1-based ids). Self-loops are implicit:
they never appear in edge sets and always receive weight.

Three kinds are supported:

- fixed: the same edge set at every t (e.g. the sparse cycle used for the
  transient study, see ``GraphSchedule.unbalanced_cycle``)
- erdos_renyi: every ordered pair present independently with probability
  p, redrawn each slot from a stream keyed by (seed, t) so replay is exact
- scripted: an explicit list of edge sets, repeated periodically; loaded
  from a text file with one line per slot of comma-separated ``i>k``
  edges (a blank line is an empty slot)
"""

from __future__ import annotations

import functools
from collections.abc import Iterator
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import TypeAlias

import numpy as np

from poissonnet.core.model import FloatArray
from poissonnet.core.seeding import make_rng
from poissonnet.exceptions import ArtifactError, DomainError, GraphError, ScheduleFormatError

Edge: TypeAlias = tuple[int, int]
EdgeSet: TypeAlias = frozenset[Edge]

COLUMN_SUM_TOL = 1e-12


class ScheduleKind(Enum):
    """Kinds of communication schedule."""

    FIXED = "fixed"
    ERDOS_RENYI = "erdos_renyi"
    SCRIPTED = "scripted"

    def __str__(self) -> str:
        return self.value


def _check_edges(N: int, edges: EdgeSet, line: int | None = None) -> None:
    for src, dst in edges:
        if not (1 <= src <= N and 1 <= dst <= N):
            raise ScheduleFormatError(f"edge {src}>{dst} has an endpoint outside [1, {N}]", line)
        if src == dst:
            raise ScheduleFormatError(f"edge {src}>{dst} is a self-loop (implicit)", line)


@dataclass(frozen=True, slots=True)
class GraphSchedule:
    """A communication schedule t -> E(t).

    Use the classmethod constructors rather than building instances directly.

    Attributes:
        N: Number of nodes
        kind: Schedule kind
        edges: Edge set of a fixed schedule
        p: Edge probability of an Erdos-Renyi schedule
        seed: Root seed of an Erdos-Renyi schedule
        script: Per-slot edge sets of a scripted schedule
    """

    N: int
    kind: ScheduleKind
    edges: EdgeSet = frozenset()
    p: float = 0.0
    seed: int = 0
    script: tuple[EdgeSet, ...] = ()

    def __post_init__(self) -> None:
        if self.N < 1:
            raise DomainError("N", self.N, "N >= 1")
        if self.kind is ScheduleKind.FIXED:
            _check_edges(self.N, self.edges)
        elif self.kind is ScheduleKind.ERDOS_RENYI:
            if not 0.0 <= self.p <= 1.0:
                raise DomainError("p", self.p, "0 <= p <= 1")
        else:
            if not self.script:
                raise GraphError("A scripted schedule needs at least one slot")
            for slot, edges in enumerate(self.script, start=1):
                _check_edges(self.N, edges, slot)

    # -------------------------------------------------------------------------
    # Constructors
    # -------------------------------------------------------------------------

    @classmethod
    def fixed(cls, N: int, edges: set[Edge] | frozenset[Edge]) -> GraphSchedule:
        return cls(N=N, kind=ScheduleKind.FIXED, edges=frozenset(edges))

    @classmethod
    def erdos_renyi(cls, N: int, p: float, seed: int) -> GraphSchedule:
        return cls(N=N, kind=ScheduleKind.ERDOS_RENYI, p=p, seed=int(seed))

    @classmethod
    def scripted(cls, N: int, steps: list[set[Edge]] | list[EdgeSet]) -> GraphSchedule:
        return cls(N=N, kind=ScheduleKind.SCRIPTED, script=tuple(frozenset(s) for s in steps))

    @classmethod
    def cycle(cls, N: int) -> GraphSchedule:
        """Directed cycle 1 -> 2 -> ... -> N -> 1."""
        return cls.fixed(N, _cycle_edges(N))

    @classmethod
    def complete(cls, N: int) -> GraphSchedule:
        return cls.fixed(N, {(i, k) for i in range(1, N + 1) for k in range(1, N + 1) if i != k})

    @classmethod
    def unbalanced_cycle(cls, N: int = 20) -> GraphSchedule:
        """Directed cycle unbalanced by the edges 3>1, 3>2, 4>1 and 4>2."""
        if N < 4:
            raise DomainError("N", N, "the unbalanced cycle needs N >= 4")
        return cls.fixed(N, _cycle_edges(N) | {(3, 1), (3, 2), (4, 1), (4, 2)})

    @property
    def is_static(self) -> bool:
        return self.kind is ScheduleKind.FIXED


def _cycle_edges(N: int) -> set[Edge]:
    if N < 2:
        return set()
    return {(i, i % N + 1) for i in range(1, N + 1)}


# =============================================================================
# Edge sets and weights
# =============================================================================


def edges_at(sched: GraphSchedule, t: int) -> EdgeSet:
    """Edge set E(t); deterministic for (sched, t).

    Raises:
        DomainError: If t < 0
    """
    if t < 0:
        raise DomainError("t", t, "t >= 0")
    if sched.kind is ScheduleKind.FIXED:
        return sched.edges
    if sched.kind is ScheduleKind.SCRIPTED:
        return sched.script[t % len(sched.script)]
    return _erdos_renyi_edges(sched.N, sched.p, sched.seed, t)


@functools.lru_cache(maxsize=4096)
def _erdos_renyi_edges(N: int, p: float, seed: int, t: int) -> EdgeSet:
    draws = make_rng(seed, t).random((N, N))
    mask = draws < p
    np.fill_diagonal(mask, False)
    src, dst = np.nonzero(mask)
    return frozenset(zip((src + 1).tolist(), (dst + 1).tolist(), strict=True))


@dataclass(frozen=True, slots=True, eq=False)
class WeightMatrix:
    """Column-stochastic push-sum weights W(t).

    ``entries[i, k]`` is w_{ik}(t), the share of node k's mass sent to node i.
    The array is read-only.
    """

    t: int
    entries: FloatArray

    @property
    def N(self) -> int:
        return int(self.entries.shape[0])

    @property
    def alpha(self) -> float:
        """Smallest positive entry (the uniform lower bound on weights)."""
        return float(self.entries[self.entries > 0].min())

    def column_sums(self) -> FloatArray:
        return self.entries.sum(axis=0)

    def is_column_stochastic(self, tol: float = COLUMN_SUM_TOL) -> bool:
        return bool(np.all(np.abs(self.column_sums() - 1.0) <= tol))


def push_sum_weights(N: int, edges: EdgeSet) -> FloatArray:
    """Build w_{ik} = 1/d_k for k -> i or k = i, where d_k counts the self-loop.

    An isolated node gets the unit column e_k, i.e. keeps its own state.
    """
    adjacency = np.zeros((N, N), dtype=np.float64)
    for src, dst in edges:
        adjacency[dst - 1, src - 1] = 1.0
    np.fill_diagonal(adjacency, 1.0)
    out_degree = adjacency.sum(axis=0)
    weights = adjacency / out_degree[None, :]
    weights.setflags(write=False)
    return weights


@functools.lru_cache(maxsize=256)
def _static_weights(N: int, edges: EdgeSet) -> FloatArray:
    return push_sum_weights(N, edges)


def weights_at(sched: GraphSchedule, t: int) -> WeightMatrix:
    """Push-sum weight matrix W(t) of the schedule.

    Raises:
        DomainError: If t < 0
    """
    edges = edges_at(sched, t)
    if sched.is_static:
        return WeightMatrix(t=t, entries=_static_weights(sched.N, edges))
    return WeightMatrix(t=t, entries=push_sum_weights(sched.N, edges))


def weight_sequence(sched: GraphSchedule, T: int) -> Iterator[WeightMatrix]:
    """Yield W(0), ..., W(T - 1); a fixed schedule yields one shared matrix."""
    if sched.is_static:
        shared = weights_at(sched, 0)
        for _ in range(T):
            yield shared
        return
    for t in range(T):
        yield weights_at(sched, t)


# =============================================================================
# Scripted schedule files
# =============================================================================


def parse_scripted(text: str, N: int) -> GraphSchedule:
    """Parse the line-oriented ``i>k`` format into a scripted schedule.

    Raises:
        ScheduleFormatError: On malformed tokens, out-of-range endpoints,
            self-loops, or duplicate edges within one slot
    """
    steps: list[EdgeSet] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        slot: set[Edge] = set()
        if line:
            for token in line.split(","):
                src_str, sep, dst_str = token.strip().partition(">")
                if not sep:
                    raise ScheduleFormatError(f"expected 'i>k', got {token.strip()!r}", lineno)
                try:
                    edge = (int(src_str), int(dst_str))
                except ValueError as e:
                    message = f"non-integer node in {token.strip()!r}"
                    raise ScheduleFormatError(message, lineno) from e
                if edge in slot:
                    raise ScheduleFormatError(f"duplicate edge {edge[0]}>{edge[1]}", lineno)
                slot.add(edge)
        _check_edges(N, frozenset(slot), lineno)
        steps.append(frozenset(slot))
    if not steps:
        raise ScheduleFormatError("schedule file has no slots")
    return GraphSchedule.scripted(N, steps)


def format_scripted(steps: list[EdgeSet] | tuple[EdgeSet, ...]) -> str:
    """Render edge sets in the ``i>k`` text format (sorted, LF endings)."""
    lines = [",".join(f"{src}>{dst}" for src, dst in sorted(slot)) for slot in steps]
    return "\n".join(lines) + "\n"


def load_scripted_schedule(path: Path, N: int) -> GraphSchedule:
    """Load a scripted schedule file.

    Raises:
        ArtifactError: If the file cannot be read
        ScheduleFormatError: If the content is malformed
    """
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ArtifactError(f"Cannot read schedule file {path}: {e}") from e
    return parse_scripted(text, N)


def write_scripted_schedule(path: Path, sched: GraphSchedule, horizon: int) -> None:
    """Materialise the first ``horizon`` slots of any schedule as a script file."""
    steps = [edges_at(sched, t) for t in range(horizon)]
    try:
        path.write_text(format_scripted(steps), encoding="utf-8", newline="\n")
    except OSError as e:
        raise ArtifactError(f"Cannot write schedule file {path}: {e}") from e
