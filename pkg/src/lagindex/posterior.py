"""Posterior transformations of the cross-basis coefficients.

A theta draw maps to the pointwise exposure-time effect curve at index value
m* through the Kronecker row kron(b(m*), C), and to the cumulative effect
through the column sums of the same matrix.  Summaries use equal-tailed
quantiles across pooled draws.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .splines import BasisEvaluator, SplineSpec
from .validation import ValidationError, check_matrix

__all__ = [
    "EffectSummary",
    "WeightSummary",
    "Window",
    "pointwise_effect_draws",
    "cumulative_effect_draws",
    "summarize_effects",
    "windows_of_susceptibility",
    "summarize_weights",
    "effect_grid",
]


def _basis_row(mod_spec: SplineSpec, m_star: float) -> np.ndarray:
    m = float(m_star)
    if not 0.0 <= m <= 1.0:
        raise ValidationError(f"m_star must lie in [0, 1], got {m!r}")
    return BasisEvaluator(mod_spec)(np.array([m]))[0]


def pointwise_effect_draws(theta_draws, m_star: float, mod_spec: SplineSpec, C) -> np.ndarray:
    """S x T matrix of beta_t(m*) draws: row s is kron(b(m*), C) theta_s."""
    theta = check_matrix(theta_draws, "theta_draws")
    C = np.asarray(C, dtype=float)
    b = _basis_row(mod_spec, m_star)
    nu_mod, nu_time = b.size, C.shape[1]
    if theta.shape[1] != nu_mod * nu_time:
        raise ValidationError(
            f"theta draws have {theta.shape[1]} columns, expected {nu_mod * nu_time}"
        )
    theta3 = theta.reshape(theta.shape[0], nu_mod, nu_time)
    return (theta3 * b[None, :, None]).sum(axis=1) @ C.T


def cumulative_effect_draws(theta_draws, m_star: float, mod_spec: SplineSpec, C) -> np.ndarray:
    """Length-S vector of cumulative effects: kron(b(m*), 1'C) theta_s."""
    theta = check_matrix(theta_draws, "theta_draws")
    C = np.asarray(C, dtype=float)
    b = _basis_row(mod_spec, m_star)
    w = np.kron(b, C.sum(axis=0))
    if theta.shape[1] != w.size:
        raise ValidationError(f"theta draws have {theta.shape[1]} columns, expected {w.size}")
    return theta @ w


@dataclass(frozen=True)
class EffectSummary:
    """Pointwise and cumulative effect summaries over a grid of m* values."""

    m_grid: np.ndarray
    alpha: float
    pointwise_mean: np.ndarray
    pointwise_lower: np.ndarray
    pointwise_upper: np.ndarray
    cumulative_mean: np.ndarray
    cumulative_lower: np.ndarray
    cumulative_upper: np.ndarray

    @property
    def n_times(self) -> int:
        return self.pointwise_mean.shape[1]


def summarize_effects(theta_draws, m_grid, mod_spec: SplineSpec, C, alpha: float = 0.05) -> EffectSummary:
    """Equal-tailed posterior summaries at every grid value of m*."""
    if not 0.0 < alpha < 1.0:
        raise ValidationError(f"alpha must be in (0, 1), got {alpha!r}")
    theta = check_matrix(theta_draws, "theta_draws")
    C = np.asarray(C, dtype=float)
    grid = np.asarray(m_grid, dtype=float).ravel()
    if grid.size == 0:
        raise ValidationError("empty m* grid")
    T = C.shape[0]
    G = grid.size
    pw_mean = np.empty((G, T))
    pw_lo = np.empty((G, T))
    pw_hi = np.empty((G, T))
    ce_mean = np.empty(G)
    ce_lo = np.empty(G)
    ce_hi = np.empty(G)
    probs = (alpha / 2.0, 1.0 - alpha / 2.0)
    for g, m in enumerate(grid):
        curves = pointwise_effect_draws(theta, m, mod_spec, C)
        pw_mean[g] = curves.mean(axis=0)
        qs = np.quantile(curves, probs, axis=0)
        pw_lo[g], pw_hi[g] = qs[0], qs[1]
        ce = cumulative_effect_draws(theta, m, mod_spec, C)
        ce_mean[g] = ce.mean()
        ce_lo[g], ce_hi[g] = np.quantile(ce, probs)
    return EffectSummary(
        m_grid=grid,
        alpha=alpha,
        pointwise_mean=pw_mean,
        pointwise_lower=pw_lo,
        pointwise_upper=pw_hi,
        cumulative_mean=ce_mean,
        cumulative_lower=ce_lo,
        cumulative_upper=ce_hi,
    )


@dataclass(frozen=True)
class Window:
    """Maximal run of time points whose interval excludes zero."""

    m_star: float
    t_start: int
    t_end: int
    sign: str


def windows_of_susceptibility(summary: EffectSummary, m_star: float) -> list[Window]:
    """Windows at one grid value; t is 1-based like the exposure columns."""
    idx = np.flatnonzero(np.isclose(summary.m_grid, m_star, atol=1e-12))
    if idx.size == 0:
        raise ValidationError(f"m*={m_star!r} is not on the summary grid")
    g = int(idx[0])
    lower = summary.pointwise_lower[g]
    upper = summary.pointwise_upper[g]
    sign = np.zeros(lower.size, dtype=int)
    sign[lower > 0.0] = 1
    sign[upper < 0.0] = -1
    windows: list[Window] = []
    t = 0
    while t < sign.size:
        if sign[t] == 0:
            t += 1
            continue
        start = t
        while t + 1 < sign.size and sign[t + 1] == sign[start]:
            t += 1
        windows.append(
            Window(
                m_star=float(m_star),
                t_start=start + 1,
                t_end=t + 1,
                sign="positive" if sign[start] > 0 else "negative",
            )
        )
        t += 1
    return windows


@dataclass(frozen=True)
class WeightSummary:
    names: tuple[str, ...]
    rho_mean: np.ndarray
    rho_sd: np.ndarray
    pip: np.ndarray

    def selected(self, threshold: float = 0.5) -> np.ndarray:
        return self.pip > threshold


def summarize_weights(a_draws, eta_draws, names=None) -> WeightSummary:
    """Posterior mean/SD of rho and per-modifier inclusion probabilities."""
    a = check_matrix(a_draws, "a_draws")
    eta = check_matrix(eta_draws, "eta_draws", rows=a.shape[0], cols=a.shape[1])
    totals = a.sum(axis=1, keepdims=True)
    if np.any(totals <= 0.0):
        raise ValidationError("a draw with all weights zero cannot be normalized")
    rho = a / totals
    L = a.shape[1]
    if names is None:
        names = tuple(f"m{j + 1}" for j in range(L))
    else:
        names = tuple(str(x) for x in names)
        if len(names) != L:
            raise ValidationError(f"{len(names)} names for {L} modifiers")
    sd = rho.std(axis=0, ddof=1) if rho.shape[0] > 1 else np.zeros(L)
    return WeightSummary(names=names, rho_mean=rho.mean(axis=0), rho_sd=sd, pip=eta.mean(axis=0))


def effect_grid(n_points: int = 101) -> np.ndarray:
    if n_points < 2:
        raise ValidationError("grid needs at least two points")
    return np.linspace(0.0, 1.0, n_points)
