"""Readout policy and recorded traces shared by the distributed estimators."""

from __future__ import annotations

from collections.abc import Iterator
from dataclasses import dataclass, field
from typing import Generic, TypeVar

import numpy as np

from poissonnet.core.model import FloatArray, Real
from poissonnet.exceptions import DomainError

StateT = TypeVar("StateT")


@dataclass(frozen=True, slots=True)
class Readout:
    """Which nodes and rounds a run records.

    Attributes:
        nodes: 1-based node ids to record; None records every node
        final_only: Record only the last round (and t = 0)
        stride: Record every ``stride``-th round; the last round is always kept
    """

    nodes: tuple[int, ...] | None = None
    final_only: bool = False
    stride: int = 1

    def __post_init__(self) -> None:
        if self.stride < 1:
            raise DomainError("stride", self.stride, "stride >= 1")

    def wants(self, t: int, T: int) -> bool:
        if t in (0, T):
            return True
        if self.final_only:
            return False
        return t % self.stride == 0

    def indices(self, N: int) -> np.ndarray:
        """0-based row indices of the recorded nodes."""
        if self.nodes is None:
            return np.arange(N)
        for node in self.nodes:
            if not 1 <= node <= N:
                raise DomainError("readout node", node, f"1 <= node <= {N}")
        return np.asarray(self.nodes, dtype=np.intp) - 1


@dataclass(slots=True)
class Trace(Generic[StateT]):
    """Recorded b_hat / lambda_hat readouts of one run.

    Each recorded array has the node axis first and, for batched runs, a
    trailing trial axis.
    """

    nodes: tuple[int, ...]
    times: list[int] = field(default_factory=list)
    b_hat: list[FloatArray] = field(default_factory=list)
    lambda_hat: list[FloatArray] = field(default_factory=list)
    final: StateT | None = None

    def record(self, t: int, rows: np.ndarray, b_hat: FloatArray, lambda_hat: FloatArray) -> None:
        self.times.append(t)
        self.b_hat.append(np.array(b_hat[rows]))
        self.lambda_hat.append(np.array(lambda_hat[rows]))

    def b_hat_array(self) -> FloatArray:
        """Stacked readouts with shape (len(times), len(nodes)[, B])."""
        return np.stack(self.b_hat)

    def lambda_hat_array(self) -> FloatArray:
        return np.stack(self.lambda_hat)

    def rows(self, trial: int = 0) -> Iterator[tuple[int, int, int, float, float]]:
        """Yield ``(trial, t, node, b_hat, lambda_hat)`` for a single-trial trace."""
        for t, b_row, lam_row in zip(self.times, self.b_hat, self.lambda_hat, strict=True):
            if b_row.ndim != 1:
                raise DomainError("trace rank", b_row.ndim, "rows() needs a single-trial trace")
            for node, b, lam in zip(self.nodes, b_row, lam_row, strict=True):
                yield trial, t, node, float(b), float(lam)


def consensus_residual(b_hat: FloatArray) -> Real:
    """max_{i,k} |b_i - b_k| over the node axis; one value per trial for batches."""
    value = np.max(b_hat, axis=0) - np.min(b_hat, axis=0)
    return float(value) if np.ndim(value) == 0 else value

