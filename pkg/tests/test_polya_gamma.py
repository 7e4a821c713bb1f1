"""Polya-Gamma PG(1, c) sampler checks.

Moment identities: E[PG(1,c)] = tanh(c/2)/(2c) with limit 1/4 at c=0,
and Var[PG(1,0)] = 1/24 (from the series representation
(1/(2 pi^2)) sum g_k / (k - 1/2)^2 with iid Exp(1) g_k).
"""

import numpy as np
from scipy import stats

from lagindex.polya_gamma import (
    polya_gamma_draw,
    polya_gamma_truncated_sum,
    polya_gamma_vector,
)


def pg_mean(c: float) -> float:
    return 0.25 if c == 0.0 else np.tanh(c / 2.0) / (2.0 * c)


def test_mean_across_tilt_values():
    rng = np.random.default_rng(101)
    for c in (0.0, 0.3, 1.0, 2.5, 8.0):
        draws = polya_gamma_vector(np.full(4000, c), rng)
        se = draws.std(ddof=1) / np.sqrt(draws.size)
        assert abs(draws.mean() - pg_mean(c)) < 4.0 * se, f"c={c}"


def test_variance_at_zero_tilt():
    rng = np.random.default_rng(55)
    draws = polya_gamma_vector(np.zeros(20000), rng)
    # fourth-moment SE of the sample variance, normal-ish draws
    v = draws.var(ddof=1)
    se = np.sqrt((np.mean((draws - draws.mean()) ** 4) - v**2) / draws.size)
    assert abs(v - 1.0 / 24.0) < 4.0 * se


def test_tilt_sign_is_irrelevant():
    d_pos = polya_gamma_vector(np.full(3000, 1.7), np.random.default_rng(9))
    d_neg = polya_gamma_vector(np.full(3000, -1.7), np.random.default_rng(10))
    assert stats.ks_2samp(d_pos, d_neg).pvalue > 0.01


def test_draws_positive_and_deterministic():
    c = np.linspace(-4.0, 4.0, 500)
    d1 = polya_gamma_vector(c, np.random.default_rng(3))
    d2 = polya_gamma_vector(c, np.random.default_rng(3))
    assert np.all(d1 > 0.0)
    assert np.array_equal(d1, d2)


def test_truncated_sum_fallback_mean():
    rng = np.random.default_rng(77)
    draws = np.array([polya_gamma_truncated_sum(2.0, rng) for _ in range(4000)])
    se = draws.std(ddof=1) / np.sqrt(draws.size)
    assert abs(draws.mean() - pg_mean(2.0)) < 4.0 * se


def test_extreme_tilt_uses_fallback_without_failing():
    rng = np.random.default_rng(12)
    big = 3.0e6
    draws = np.array([polya_gamma_draw(big, rng) for _ in range(200)])
    assert np.all(np.isfinite(draws)) and np.all(draws > 0.0)
    # at huge |c| the mean collapses to 1/(2c)
    assert abs(draws.mean() - pg_mean(big)) / pg_mean(big) < 0.5


def test_large_but_exact_region_stable():
    rng = np.random.default_rng(4)
    draws = np.array([polya_gamma_draw(40.0, rng) for _ in range(2000)])
    se = draws.std(ddof=1) / np.sqrt(draws.size)
    assert abs(draws.mean() - pg_mean(40.0)) < 4.0 * se
