"""Posterior effect transforms: identities, oracles, windows."""

import numpy as np
import pytest

from lagindex.posterior import (
    EffectSummary,
    cumulative_effect_draws,
    effect_grid,
    pointwise_effect_draws,
    summarize_effects,
    summarize_weights,
    windows_of_susceptibility,
)
from lagindex.sampler import SamplerConfig, model_geometry
from lagindex.splines import evaluate_basis, make_spec
from lagindex.validation import ValidationError

rng = np.random.default_rng(2024)


def _geometry(nu_mod=4, nu_time=5, T=12):
    cfg = SamplerConfig(nu_mod=nu_mod, nu_time=nu_time, iterations=10, burn_in=1)
    return model_geometry(T, cfg)


def test_cumulative_equals_summed_pointwise():
    mod_spec, _, C = _geometry()
    theta = rng.normal(size=(50, 4 * 5))
    for m in (0.0, 0.31, 0.77, 1.0):
        pw = pointwise_effect_draws(theta, m, mod_spec, C)
        ce = cumulative_effect_draws(theta, m, mod_spec, C)
        scale = np.maximum(np.abs(ce), 1.0)
        assert np.max(np.abs(pw.sum(axis=1) - ce) / scale) < 1e-10


def test_single_mod_basis_makes_curves_flat_in_m():
    """nu_mod = 1 collapses the surface: beta_t(m*) cannot depend on m*."""
    mod_spec, _, C = _geometry(nu_mod=1)
    theta = rng.normal(size=(20, 1 * 5))
    base = pointwise_effect_draws(theta, 0.1, mod_spec, C)
    for m in (0.4, 0.9):
        assert np.allclose(pointwise_effect_draws(theta, m, mod_spec, C), base, atol=1e-12)


def test_pointwise_draws_match_double_loop_oracle():
    mod_spec, _, C = _geometry(nu_mod=3, nu_time=4, T=9)
    theta = rng.normal(size=(7, 12))
    m = 0.42
    b = evaluate_basis(mod_spec, np.array([m])).values[0]
    got = pointwise_effect_draws(theta, m, mod_spec, C)
    oracle = np.zeros((7, 9))
    for s in range(7):
        for t in range(9):
            for k in range(3):
                for j in range(4):
                    oracle[s, t] += theta[s, k * 4 + j] * b[k] * C[t, j]
    assert np.max(np.abs(got - oracle)) < 1e-12


def test_summary_quantiles_match_numpy():
    mod_spec, _, C = _geometry()
    theta = rng.normal(size=(200, 20))
    grid = np.array([0.2, 0.6])
    summary = summarize_effects(theta, grid, mod_spec, C, alpha=0.1)
    for gi, m in enumerate(grid):
        ce = cumulative_effect_draws(theta, m, mod_spec, C)
        assert abs(summary.cumulative_mean[gi] - ce.mean()) < 1e-12
        assert abs(summary.cumulative_lower[gi] - np.quantile(ce, 0.05)) < 1e-12
        assert abs(summary.cumulative_upper[gi] - np.quantile(ce, 0.95)) < 1e-12
        pw = pointwise_effect_draws(theta, m, mod_spec, C)
        assert np.allclose(summary.pointwise_mean[gi], pw.mean(axis=0), atol=1e-12)
        assert np.allclose(summary.pointwise_lower[gi], np.quantile(pw, 0.05, axis=0), atol=1e-12)
    assert np.all(summary.pointwise_lower <= summary.pointwise_upper)


def _toy_summary(lower, upper, m=0.5):
    lower = np.asarray(lower, dtype=float)[None, :]
    upper = np.asarray(upper, dtype=float)[None, :]
    mid = (lower + upper) / 2.0
    T = lower.shape[1]
    return EffectSummary(
        m_grid=np.array([m]), alpha=0.05,
        pointwise_mean=mid, pointwise_lower=lower, pointwise_upper=upper,
        cumulative_mean=mid.sum(1), cumulative_lower=lower.sum(1), cumulative_upper=upper.sum(1),
    )


def test_windows_find_maximal_sign_runs():
    # weeks:        1    2     3     4      5     6
    lower = [0.1, 0.2, -1.0, 0.3, -0.5, 0.2]
    upper = [0.5, 0.9, -0.1, 0.8, 0.5, 0.4]
    ws = windows_of_susceptibility(_toy_summary(lower, upper), 0.5)
    assert [(w.t_start, w.t_end, w.sign) for w in ws] == [
        (1, 2, "positive"), (3, 3, "negative"), (4, 4, "positive"), (6, 6, "positive"),
    ]
    assert all(w.m_star == 0.5 for w in ws)


def test_windows_empty_when_intervals_cover_zero():
    ws = windows_of_susceptibility(_toy_summary([-1.0, -0.2], [0.5, 0.3]), 0.5)
    assert ws == []


def test_windows_require_grid_membership():
    with pytest.raises(ValidationError):
        windows_of_susceptibility(_toy_summary([0.1], [0.2], m=0.5), 0.25)


def test_summarize_weights_oracle():
    a = np.array([[1.0, 1.0], [3.0, 1.0], [0.0, 2.0]])
    eta = np.array([[1.0, 1.0], [1.0, 1.0], [0.0, 1.0]])
    ws = summarize_weights(a, eta, names=("alpha", "beta"))
    rho = np.array([[0.5, 0.5], [0.75, 0.25], [0.0, 1.0]])
    assert np.allclose(ws.rho_mean, rho.mean(axis=0), atol=1e-15)
    assert np.allclose(ws.rho_sd, rho.std(axis=0, ddof=1), atol=1e-15)
    assert np.allclose(ws.pip, [2.0 / 3.0, 1.0], atol=1e-15)
    assert ws.names == ("alpha", "beta")
    assert ws.selected().tolist() == [True, True]
    assert ws.selected(threshold=0.9).tolist() == [False, True]


def test_summarize_weights_default_names():
    a = np.abs(rng.normal(size=(10, 3))) + 0.1
    ws = summarize_weights(a, np.ones_like(a))
    assert ws.names == ("m1", "m2", "m3")


def test_effect_grid_endpoints():
    g = effect_grid(11)
    assert g[0] == 0.0 and g[-1] == 1.0 and g.size == 11
    assert np.allclose(np.diff(g), 0.1)
