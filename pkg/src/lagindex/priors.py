"""Prior configuration and sampler state initialization.

Weights get independent Gamma(q_l, 1) priors so that rho = a/sum(a) is
Dirichlet(q); with selection on, each weight instead follows the spike-slab
mixture eta_l * Gamma(q_l, 1) + (1 - eta_l) * delta_0 with
eta_l ~ Bernoulli(nu_l).  Cross-basis coefficients are N(0, tau2), covariate
coefficients N(0, xi2) except the flat-prior intercept, and the Gaussian
error variance is InverseGamma(ig_shape, ig_scale).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .design import CohortData, IndexWeights
from .validation import ValidationError, check_positive, check_vector

__all__ = ["PriorConfig", "SamplerState", "normalize_weights", "log_gamma_prior", "init_state"]


def _resolve(value, L: int, name: str) -> np.ndarray:
    arr = np.asarray(value, dtype=float)
    if arr.ndim == 0:
        arr = np.full(L, float(arr))
    arr = check_vector(arr, name, size=L)
    return arr


@dataclass(frozen=True)
class PriorConfig:
    """Hyperparameters; q and inclusion_prob may be scalars or length-L vectors."""

    q: float | np.ndarray = 1.0
    tau2: float = 100.0
    xi2: float = 110.0
    ig_shape: float = 1.0
    ig_scale: float = 0.001
    inclusion_prob: float | np.ndarray = 0.5
    selection: bool = False

    def __post_init__(self):
        for name in ("tau2", "xi2", "ig_shape", "ig_scale"):
            check_positive(getattr(self, name), name)
        if np.any(np.asarray(self.q, dtype=float) <= 0.0):
            raise ValidationError("q must be positive")
        nu = np.asarray(self.inclusion_prob, dtype=float)
        if np.any(nu <= 0.0) or np.any(nu >= 1.0):
            raise ValidationError("inclusion_prob must lie strictly in (0, 1)")

    def q_vector(self, L: int) -> np.ndarray:
        return _resolve(self.q, L, "q")

    def inclusion_vector(self, L: int) -> np.ndarray:
        return _resolve(self.inclusion_prob, L, "inclusion_prob")


@dataclass
class SamplerState:
    """Mutable per-chain state; arrays are owned by the chain."""

    theta: np.ndarray
    gamma: np.ndarray
    sigma2: float
    weights: IndexWeights
    zeta: np.ndarray
    omega: np.ndarray | None = None


def normalize_weights(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    total = a.sum()
    if total <= 0.0:
        raise ValidationError("all weights are zero; at least one modifier must be active")
    return a / total


def log_gamma_prior(a: float, q: float) -> float:
    """log Gamma(q, 1) density at a, dropping the normalizing constant."""
    if a <= 0.0:
        raise ValidationError(f"log_gamma_prior needs a > 0, got {a!r}")
    if q == 1.0:
        return -a
    return (q - 1.0) * np.log(a) - a


def init_state(data: CohortData, config, rng: np.random.Generator) -> SamplerState:
    """Draw the starting state from the priors.

    theta ~ N(0, tau2), non-intercept gamma ~ N(0, xi2), intercept 0,
    sigma2 = 1, a_l ~ Gamma(q_l, 1), all eta_l = 1, zeta_l = 0.1.
    A fixed-weights config pins a = rho exactly and skips the prior draw.
    """
    priors: PriorConfig = config.priors
    L = data.n_modifiers
    p = data.n_covariates
    jk = config.nu_mod * config.nu_time
    theta = rng.normal(0.0, np.sqrt(priors.tau2), size=jk)
    gamma = rng.normal(0.0, np.sqrt(priors.xi2), size=p)
    gamma[0] = 0.0
    fixed = getattr(config, "fixed_weights", None)
    if fixed is not None:
        a = check_vector(fixed, "fixed_weights", size=L).copy()
        weights = IndexWeights.from_unnormalized(a)
    else:
        q = priors.q_vector(L)
        a = rng.gamma(shape=q, scale=1.0)
        a = np.maximum(a, 1e-12)  # Gamma draw can underflow to 0 for tiny q
        weights = IndexWeights.from_unnormalized(a)
    omega = np.ones(data.n) if data.family == "binomial" else None
    return SamplerState(
        theta=theta,
        gamma=gamma,
        sigma2=1.0,
        weights=weights,
        zeta=np.full(L, 0.1),
        omega=omega,
    )
