"""Synthetic cohort generation for the simulation study.

The true pointwise effect is beta_t(m*) = m* f(t, c(m*)) with
f(t, c) = 2.5 phi((t - c) / 5) and c(m*) = T / (1 + exp(-20 (m* - 0.5))),
so the susceptibility bump slides from the start of the window to its end
as the index moves from 0 to 1.  Modifiers are correlated Gaussians min-max
scaled onto [0, 1]; exposures are a truncated AR(1) surrogate or draws from
a user-supplied pool; noise is calibrated to a target signal-to-noise ratio.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .design import CohortData
from .validation import NumericalError, ValidationError, check_matrix

__all__ = [
    "ScenarioSpec",
    "SimulatedCohort",
    "scenario_weights",
    "generate_modifiers",
    "generate_exposures",
    "generate_covariates",
    "true_effect",
    "generate_response",
    "simulate_cohort",
]

SCENARIOS = ("equal", "different", "sparse")

# covariate covariance from the study design
_COV_COVARIANCE = np.array([
    [1.0, 0.5, 0.6],
    [0.5, 1.0, 0.7],
    [0.6, 0.7, 1.0],
])


@dataclass(frozen=True)
class ScenarioSpec:
    """One simulation cell: scenario weights, cohort size, noise level."""

    scenario: str
    n: int = 500
    L: int = 3
    T: int = 37
    snr: float = 1.0
    replicates: int = 20
    seed: int = 0
    exposure_source: str = "synthetic_ar1"
    exposure_pool: np.ndarray | None = None
    pool_replace: bool = True

    def __post_init__(self):
        if self.scenario not in SCENARIOS:
            raise ValidationError(f"scenario must be one of {SCENARIOS}, got {self.scenario!r}")
        for name, low in (("n", 2), ("L", 1), ("T", 2), ("replicates", 1)):
            v = getattr(self, name)
            if int(v) != v or v < low:
                raise ValidationError(f"{name} must be an integer >= {low}, got {v!r}")
            object.__setattr__(self, name, int(v))
        if self.snr <= 0.0:
            raise ValidationError(f"snr must be positive, got {self.snr!r}")
        scenario_weights(self.scenario, self.L)  # validates L against the scenario
        if self.exposure_source not in ("synthetic_ar1", "csv_pool"):
            raise ValidationError(f"unknown exposure source {self.exposure_source!r}")
        if self.exposure_source == "csv_pool" and self.exposure_pool is None:
            raise ValidationError("csv_pool exposures need an exposure_pool matrix")


def scenario_weights(scenario: str, L: int) -> np.ndarray:
    """True index weights for each scenario."""
    if scenario == "equal":
        if L != 3:
            raise ValidationError("the equal scenario uses exactly 3 modifiers")
        return np.full(3, 1.0 / 3.0)
    if scenario == "different":
        if L != 3:
            raise ValidationError("the different scenario uses exactly 3 modifiers")
        return np.array([0.5, 0.4, 0.1])
    if scenario == "sparse":
        if L < 3:
            raise ValidationError("the sparse scenario needs at least 3 modifiers")
        rho = np.zeros(L)
        rho[:3] = 1.0 / 3.0
        return rho
    raise ValidationError(f"scenario must be one of {SCENARIOS}, got {scenario!r}")


def generate_modifiers(n: int, L: int, rng: np.random.Generator) -> np.ndarray:
    """Correlated Gaussians min-max scaled to [0, 1] per column.

    Pairwise correlations are Uniform(0.4, 0.7); the symmetrized matrix is
    eigenvalue-floored at 1e-6 to restore positive definiteness.
    """
    corr = np.eye(L)
    if L > 1:
        iu = np.triu_indices(L, 1)
        vals = rng.uniform(0.4, 0.7, size=iu[0].size)
        corr[iu] = vals
        corr[(iu[1], iu[0])] = vals
        evals, evecs = np.linalg.eigh(corr)
        if evals.min() < 1e-6:
            evals = np.maximum(evals, 1e-6)
            corr = (evecs * evals) @ evecs.T
    chol = None
    jitter = 0.0
    for attempt in range(100):
        try:
            chol = np.linalg.cholesky(corr + jitter * np.eye(L))
            break
        except np.linalg.LinAlgError:
            jitter = 1e-10 if jitter == 0.0 else jitter * 10.0
    if chol is None:
        raise NumericalError("modifier correlation matrix is not positive definite")
    raw = rng.standard_normal((n, L)) @ chol.T
    lo = raw.min(axis=0)
    hi = raw.max(axis=0)
    if np.any(hi - lo <= 0.0):
        raise NumericalError("degenerate modifier column (zero range)")
    return (raw - lo) / (hi - lo)


def generate_exposures(
    n: int,
    T: int,
    rng: np.random.Generator,
    source: str = "synthetic_ar1",
    pool: np.ndarray | None = None,
    replace: bool = True,
) -> np.ndarray:
    """Exposure histories: truncated AR(1) surrogate or rows of a pool."""
    if source == "synthetic_ar1":
        # lag-1 correlation 0.8, marginal mean 7 and SD 3, floored at 0
        phi = 0.8
        mean, sd = 7.0, 3.0
        innov = sd * math.sqrt(1.0 - phi * phi)
        z = rng.standard_normal((n, T))
        x = np.empty((n, T))
        x[:, 0] = mean + sd * z[:, 0]
        for t in range(1, T):
            x[:, t] = mean + phi * (x[:, t - 1] - mean) + innov * z[:, t]
        return np.clip(x, 0.0, None)
    if source == "csv_pool":
        pool = check_matrix(pool, "exposure pool", cols=T)
        if not replace and pool.shape[0] < n:
            raise ValidationError(
                f"pool has {pool.shape[0]} rows; {n} needed without replacement"
            )
        idx = rng.choice(pool.shape[0], size=n, replace=replace)
        return pool[idx]
    raise ValidationError(f"unknown exposure source {source!r}")


def generate_covariates(n: int, X: np.ndarray, rng: np.random.Generator, n_modifiers: int):
    """Three correlated covariates plus true coefficients.

    Covariates are MVN centered at the cohort mean of the first exposure
    week; their coefficients are N(0, 1) and the modifier main-effect
    coefficients are Uniform(-1, 1).
    """
    mean = float(np.mean(X[:, 0]))
    chol = np.linalg.cholesky(_COV_COVARIANCE)
    covariates = mean + rng.standard_normal((n, 3)) @ chol.T
    coef_cov = rng.standard_normal(3)
    coef_mod = rng.uniform(-1.0, 1.0, size=n_modifiers)
    return covariates, coef_cov, coef_mod


def true_effect(t, m_star, n_times: int = 37):
    """beta_t(m*) = m* 2.5 phi((t - c)/5), c = n_times logistic(20 (m* - 0.5))."""
    t = np.asarray(t, dtype=float)
    m = np.asarray(m_star, dtype=float)
    center = n_times / (1.0 + np.exp(-20.0 * (m - 0.5)))
    z = (t - center) / 5.0
    return m * 2.5 * np.exp(-0.5 * z * z) / math.sqrt(2.0 * math.pi)


def generate_response(X, beta_true, Z, gamma_true, snr: float, rng: np.random.Generator):
    """Gaussian response with sigma = SD(lag term) / snr; returns (y, sigma)."""
    lag_term = (X * beta_true).sum(axis=1)
    signal = float(np.std(lag_term, ddof=1))
    if signal <= 0.0:
        raise ValidationError("the exposure term has zero variance; cannot set the noise scale")
    sigma = signal / snr
    y = lag_term + Z @ gamma_true + sigma * rng.standard_normal(X.shape[0])
    return y, sigma


@dataclass(frozen=True)
class SimulatedCohort:
    data: CohortData
    rho_true: np.ndarray
    m_star_true: np.ndarray
    beta_true: np.ndarray
    gamma_true: np.ndarray
    sigma_true: float
    spec: ScenarioSpec
    replicate: int

    @property
    def ce_true(self) -> np.ndarray:
        return self.beta_true.sum(axis=1)


def simulate_cohort(spec: ScenarioSpec, replicate: int = 0) -> SimulatedCohort:
    """Generate one replicate; fully determined by spec.seed + replicate."""
    rng = np.random.default_rng(spec.seed + replicate)
    X = generate_exposures(
        spec.n, spec.T, rng, spec.exposure_source, spec.exposure_pool, spec.pool_replace
    )
    M = generate_modifiers(spec.n, spec.L, rng)
    covariates, coef_cov, coef_mod = generate_covariates(spec.n, X, rng, spec.L)
    rho = scenario_weights(spec.scenario, spec.L)
    m_star = np.clip(M @ rho, 0.0, 1.0)
    t_grid = np.arange(1.0, spec.T + 1.0)
    beta = true_effect(t_grid[None, :], m_star[:, None], spec.T)
    gamma = np.concatenate([[0.0], coef_mod, coef_cov])
    Z = np.hstack([np.ones((spec.n, 1)), M, covariates])
    y, sigma = generate_response(X, beta, Z, gamma, spec.snr, rng)
    data = CohortData(y=y, X=X, M=M, Z=Z, family="gaussian")
    return SimulatedCohort(
        data=data,
        rho_true=rho,
        m_star_true=m_star,
        beta_true=beta,
        gamma_true=gamma,
        sigma_true=sigma,
        spec=spec,
        replicate=replicate,
    )
