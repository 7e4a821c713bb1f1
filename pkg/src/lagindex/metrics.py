"""Replicate scoring: index recovery, effect RMSE, interval coverage/width.

All intervals are equal-tailed with numpy's linear-interpolation quantiles.
Wald-interval helpers exist for the fixed-index comparator convention and
are exercised only by unit tests.
"""

from __future__ import annotations

from dataclasses import dataclass, fields

import numpy as np
from scipy.stats import norm

from .validation import ValidationError, check_matrix, check_vector

__all__ = [
    "IntervalScore",
    "ReplicateScore",
    "index_metrics",
    "cumulative_metrics",
    "pointwise_metrics",
    "PointwiseAccumulator",
    "aggregate",
    "wald_metrics",
    "mcse",
]


@dataclass(frozen=True)
class IntervalScore:
    rmse: float
    coverage: float
    width: float


@dataclass(frozen=True)
class ReplicateScore:
    index_rmse: float
    index_abs_bias: float
    cumulative: IntervalScore
    pointwise: IntervalScore


def index_metrics(m_true, m_hat) -> tuple[float, float]:
    """(RMSE, mean absolute bias) of the fitted index values."""
    m_true = check_vector(m_true, "m_true")
    m_hat = check_vector(m_hat, "m_hat", size=m_true.size)
    diff = m_true - m_hat
    return float(np.sqrt(np.mean(diff * diff))), float(np.mean(np.abs(diff)))


def _interval_score(truth: np.ndarray, draws: np.ndarray, alpha: float) -> IntervalScore:
    # draws axis 0 indexes posterior samples
    est = draws.mean(axis=0)
    err = truth - est
    lo, hi = np.quantile(draws, (alpha / 2.0, 1.0 - alpha / 2.0), axis=0)
    covered = (truth >= lo) & (truth <= hi)
    return IntervalScore(
        rmse=float(np.sqrt(np.mean(err * err))),
        coverage=float(np.mean(covered)),
        width=float(np.mean(hi - lo)),
    )


def cumulative_metrics(ce_true, ce_draws, alpha: float = 0.05) -> IntervalScore:
    """Scores the per-subject cumulative effect; ce_draws is S x n."""
    ce_true = check_vector(ce_true, "ce_true")
    ce_draws = check_matrix(ce_draws, "ce_draws", cols=ce_true.size)
    return _interval_score(ce_true, ce_draws, alpha)


class PointwiseAccumulator:
    """Streams subject chunks so the S x n x T cube never fully materializes."""

    def __init__(self, alpha: float = 0.05):
        if not 0.0 < alpha < 1.0:
            raise ValidationError(f"alpha must be in (0, 1), got {alpha!r}")
        self.alpha = alpha
        self._sq_err = 0.0
        self._covered = 0.0
        self._width = 0.0
        self._cells = 0

    def add(self, truth_chunk: np.ndarray, draws_chunk: np.ndarray) -> None:
        truth = np.asarray(truth_chunk, dtype=float)
        draws = np.asarray(draws_chunk, dtype=float)
        if draws.shape[1:] != truth.shape:
            raise ValidationError(
                f"draw chunk shape {draws.shape} does not match truth chunk {truth.shape}"
            )
        est = draws.mean(axis=0)
        lo, hi = np.quantile(draws, (self.alpha / 2.0, 1.0 - self.alpha / 2.0), axis=0)
        err = truth - est
        self._sq_err += float(np.sum(err * err))
        self._covered += float(np.sum((truth >= lo) & (truth <= hi)))
        self._width += float(np.sum(hi - lo))
        self._cells += truth.size

    def finish(self) -> IntervalScore:
        if self._cells == 0:
            raise ValidationError("no chunks were added")
        return IntervalScore(
            rmse=float(np.sqrt(self._sq_err / self._cells)),
            coverage=self._covered / self._cells,
            width=self._width / self._cells,
        )


def pointwise_metrics(beta_true, beta_draws, alpha: float = 0.05) -> IntervalScore:
    """Scores the pointwise surface; beta_draws is S x n x T."""
    beta_true = check_matrix(beta_true, "beta_true")
    draws = np.asarray(beta_draws, dtype=float)
    if draws.ndim != 3 or draws.shape[1:] != beta_true.shape:
        raise ValidationError(
            f"beta_draws must be S x {beta_true.shape}, got {draws.shape}"
        )
    acc = PointwiseAccumulator(alpha)
    acc.add(beta_true, draws)
    return acc.finish()


def aggregate(scores: list[ReplicateScore]) -> ReplicateScore:
    """Field-wise mean across replicates."""
    if not scores:
        raise ValidationError("no replicate scores to aggregate")

    def mean_of(getter):
        return float(np.mean([getter(s) for s in scores]))

    def mean_interval(getter):
        return IntervalScore(
            rmse=mean_of(lambda s: getter(s).rmse),
            coverage=mean_of(lambda s: getter(s).coverage),
            width=mean_of(lambda s: getter(s).width),
        )

    return ReplicateScore(
        index_rmse=mean_of(lambda s: s.index_rmse),
        index_abs_bias=mean_of(lambda s: s.index_abs_bias),
        cumulative=mean_interval(lambda s: s.cumulative),
        pointwise=mean_interval(lambda s: s.pointwise),
    )


def wald_metrics(truth, estimate, variance, alpha: float = 0.05) -> IntervalScore:
    """Normal-theory intervals estimate +/- z * sqrt(variance)."""
    truth = np.asarray(truth, dtype=float)
    estimate = np.asarray(estimate, dtype=float)
    variance = np.asarray(variance, dtype=float)
    if np.any(variance < 0.0):
        raise ValidationError("variance estimates must be non-negative")
    z = norm.ppf(1.0 - alpha / 2.0)
    half = z * np.sqrt(variance)
    err = truth - estimate
    covered = np.abs(err) <= half
    return IntervalScore(
        rmse=float(np.sqrt(np.mean(err * err))),
        coverage=float(np.mean(covered)),
        width=float(np.mean(2.0 * half)),
    )


def mcse(x, batches: int = 50) -> float:
    """Batch-means Monte Carlo standard error of a chain mean."""
    x = check_vector(x, "x")
    if x.size < 2 * batches:
        batches = max(2, x.size // 2)
    size = x.size // batches
    trimmed = x[: size * batches].reshape(batches, size)
    return float(trimmed.mean(axis=1).std(ddof=1) / np.sqrt(batches))
