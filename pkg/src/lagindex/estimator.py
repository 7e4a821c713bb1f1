"""Scikit-learn style front end for the index-modified distributed lag model."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator

from .design import CohortData
from .posterior import (
    EffectSummary,
    Window,
    effect_grid,
    summarize_effects,
    summarize_weights,
    windows_of_susceptibility,
)
from .priors import PriorConfig
from .sampler import PosteriorDraws, SamplerConfig, model_geometry, run_multichain
from .splines import BasisEvaluator
from .validation import ValidationError, check_matrix, check_vector

__all__ = ["IndexModifiedDLM"]


class IndexModifiedDLM(BaseEstimator):
    """Bayesian distributed lag model whose lag effects vary with a
    data-driven weighted index of candidate modifiers.

    fit(X, y, modifiers=M) estimates the simplex index weights jointly with
    a natural-cubic-spline exposure-time-response surface by MCMC.  X holds
    one exposure column per time point; modifiers must already sit in
    [0, 1].  With ``selection=True`` the weights get a spike-slab prior and
    per-modifier inclusion probabilities are reported.

    Parameters mirror the sampler configuration: ``df_mod``/``df_time`` are
    the spline degrees of freedom, ``weights`` is ``"estimate"`` or a fixed
    simplex vector, and ``family`` is ``"gaussian"`` or ``"binomial"``.
    """

    def __init__(
        self,
        df_mod: int = 5,
        df_time: int = 5,
        iterations: int = 5000,
        burn_in: int = 2000,
        thin: int = 1,
        chains: int = 1,
        seed: int = 0,
        family: str = "gaussian",
        selection: bool = False,
        weights="estimate",
        q=1.0,
        tau2: float = 100.0,
        xi2: float = 110.0,
        ig_shape: float = 1.0,
        ig_scale: float = 0.001,
        inclusion_prob=0.5,
        adapt_target: float = 0.44,
        adapt_window: int = 50,
        random_scan: bool = False,
        debug_checks: bool = False,
    ):
        self.df_mod = df_mod
        self.df_time = df_time
        self.iterations = iterations
        self.burn_in = burn_in
        self.thin = thin
        self.chains = chains
        self.seed = seed
        self.family = family
        self.selection = selection
        self.weights = weights
        self.q = q
        self.tau2 = tau2
        self.xi2 = xi2
        self.ig_shape = ig_shape
        self.ig_scale = ig_scale
        self.inclusion_prob = inclusion_prob
        self.adapt_target = adapt_target
        self.adapt_window = adapt_window
        self.random_scan = random_scan
        self.debug_checks = debug_checks

    def _sampler_config(self) -> SamplerConfig:
        priors = PriorConfig(
            q=self.q,
            tau2=self.tau2,
            xi2=self.xi2,
            ig_shape=self.ig_shape,
            ig_scale=self.ig_scale,
            inclusion_prob=self.inclusion_prob,
            selection=self.selection,
        )
        fixed = None
        if not (isinstance(self.weights, str) and self.weights == "estimate"):
            fixed = check_vector(self.weights, "weights")
        return SamplerConfig(
            nu_mod=self.df_mod,
            nu_time=self.df_time,
            iterations=self.iterations,
            burn_in=self.burn_in,
            thin=self.thin,
            chains=self.chains,
            seed=self.seed,
            priors=priors,
            adapt_target=self.adapt_target,
            adapt_window=self.adapt_window,
            random_scan=self.random_scan,
            fixed_weights=fixed,
            debug_checks=self.debug_checks,
        )

    def fit(self, X, y, modifiers=None, covariates=None, modifier_names=None):
        """Run the sampler; X is n x T exposures, modifiers n x L in [0, 1]."""
        if modifiers is None:
            raise ValidationError("modifiers are required: pass modifiers=M (n x L in [0, 1])")
        data = CohortData.assemble(y=y, X=X, M=modifiers, covariates=covariates, family=self.family)
        config = self._sampler_config()
        self.chain_draws_ = run_multichain(data, config)
        self.draws_ = PosteriorDraws.pool(self.chain_draws_)
        self.config_ = config
        self.n_times_ = data.n_times
        self.n_modifiers_ = data.n_modifiers
        self.mod_spec_, self.time_spec_, self.C_ = model_geometry(data.n_times, config)
        if modifier_names is None:
            modifier_names = tuple(f"m{j + 1}" for j in range(data.n_modifiers))
        self.weight_summary_ = summarize_weights(self.draws_.a, self.draws_.eta, modifier_names)
        self.rho_ = self.weight_summary_.rho_mean
        self.index_ = np.clip(data.M @ self.rho_, 0.0, 1.0)
        return self

    def _check_fitted(self):
        if not hasattr(self, "draws_"):
            raise ValidationError("call fit before requesting posterior summaries")

    def effect_curves(self, m_values=None, alpha: float = 0.05) -> EffectSummary:
        """Posterior effect summaries on a grid of index values."""
        self._check_fitted()
        grid = effect_grid() if m_values is None else np.asarray(m_values, dtype=float).ravel()
        return summarize_effects(self.draws_.theta, grid, self.mod_spec_, self.C_, alpha)

    def windows(self, m_value: float, alpha: float = 0.05) -> list[Window]:
        """Windows of susceptibility at one index value."""
        self._check_fitted()
        summary = self.effect_curves(np.array([m_value]), alpha)
        return windows_of_susceptibility(summary, m_value)

    def predict(self, X, modifiers=None, covariates=None):
        """Posterior mean response (probability for the binomial family)."""
        self._check_fitted()
        if modifiers is None:
            raise ValidationError("modifiers are required for prediction")
        X = check_matrix(X, "X", cols=self.n_times_)
        n = X.shape[0]
        M = check_matrix(modifiers, "modifiers", rows=n, cols=self.n_modifiers_)
        blocks = [np.ones((n, 1)), M]
        if covariates is not None:
            blocks.append(check_matrix(covariates, "covariates", rows=n))
        Z = np.hstack(blocks)
        if Z.shape[1] != self.draws_.gamma.shape[1]:
            raise ValidationError(
                f"covariate block has {Z.shape[1]} columns, the fit used {self.draws_.gamma.shape[1]}"
            )
        V = X @ self.C_
        ev = BasisEvaluator(self.mod_spec_)
        rho_draws = self.draws_.rho
        S = self.draws_.n_draws
        nu_mod, nu_time = self.config_.nu_mod, self.config_.nu_time
        total = np.zeros(n)
        for s in range(S):
            m = np.clip(M @ rho_draws[s], 0.0, 1.0)
            B = ev(m)
            theta2d = self.draws_.theta[s].reshape(nu_mod, nu_time)
            eta = (B * (V @ theta2d.T)).sum(axis=1) + Z @ self.draws_.gamma[s]
            if self.family == "binomial":
                total += 1.0 / (1.0 + np.exp(-eta))
            else:
                total += eta
        return total / S
