"""Streaming sample moments and Monte Carlo RMSE.

Each batch of trials is reduced with a two-pass mean/M2, and batches are
combined with the pairwise (Chan et al.) update, so the result does not
depend on how trials were grouped beyond floating-point summation order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from poissonnet.core.model import FloatArray
from poissonnet.exceptions import DimensionMismatchError


@dataclass(frozen=True, slots=True, eq=False)
class SampleStats:
    """Running moments of an estimator, element-wise over a fixed shape.

    Attributes:
        count: Number of trials accumulated
        mean: Sample mean
        m2: Sum of squared deviations from the mean
        mse: Mean squared error against the per-trial truth
    """

    count: int
    mean: FloatArray
    m2: FloatArray
    mse: FloatArray

    @classmethod
    def empty(cls, shape: tuple[int, ...]) -> SampleStats:
        zeros = np.zeros(shape)
        return cls(count=0, mean=zeros, m2=zeros.copy(), mse=zeros.copy())

    @classmethod
    def from_batch(cls, values: FloatArray, truth: FloatArray | float) -> SampleStats:
        """Moments of a batch whose trailing axis indexes trials."""
        values = np.asarray(values, dtype=np.float64)
        count = values.shape[-1]
        mean = values.mean(axis=-1)
        m2 = np.sum((values - mean[..., None]) ** 2, axis=-1)
        err = values - np.asarray(truth, dtype=np.float64)
        return cls(count=count, mean=mean, m2=m2, mse=np.mean(err**2, axis=-1))

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(self.mean.shape)

    def merge(self, other: SampleStats) -> SampleStats:
        """Combine two disjoint sets of trials."""
        if other.count == 0:
            return self
        if self.count == 0:
            return other
        if self.shape != other.shape:
            raise DimensionMismatchError(len(self.shape), len(other.shape), "statistics shape")
        total = self.count + other.count
        delta = other.mean - self.mean
        mean = self.mean + delta * (other.count / total)
        m2 = self.m2 + other.m2 + delta**2 * (self.count * other.count / total)
        mse = (self.mse * self.count + other.mse * other.count) / total
        return SampleStats(count=total, mean=mean, m2=m2, mse=mse)

    def update(self, values: FloatArray, truth: FloatArray | float) -> SampleStats:
        return self.merge(SampleStats.from_batch(values, truth))

    @property
    def variance(self) -> FloatArray:
        """Unbiased sample variance (0 for a single trial)."""
        if self.count < 2:
            return np.zeros_like(self.mean)
        return self.m2 / (self.count - 1)

    @property
    def std_error(self) -> FloatArray:
        """Monte Carlo standard error of the mean."""
        if self.count == 0:
            return np.zeros_like(self.mean)
        return np.sqrt(self.variance / self.count)

    @property
    def rmse(self) -> FloatArray:
        """sqrt((1/M) sum (estimate - truth)^2)."""
        return np.sqrt(self.mse)
