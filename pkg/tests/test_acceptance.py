"""End-to-end statistical acceptance checks.

Each test is one pass/fail gate: sampler correctness against closed-form
oracles, prior recovery, simulation-study operating characteristics at desk
scale, latent-variable moments, exact identities, data-generator spot values,
and byte-level determinism of the command-line study runner.  Quantitative
details print with ``pytest -s``.
"""

import time

import numpy as np
import pytest

from lagindex import cli
from lagindex.design import (
    assemble_design,
    build_cross_basis,
    modifier_index,
    time_contraction,
)
from lagindex.metrics import cumulative_metrics, index_metrics, mcse, pointwise_metrics
from lagindex.polya_gamma import polya_gamma_vector
from lagindex.posterior import cumulative_effect_draws, pointwise_effect_draws
from lagindex.priors import PriorConfig
from lagindex.sampler import (
    SamplerConfig,
    folded_normal_logpdf,
    model_geometry,
    ridge_posterior_mean,
    run_chain,
    sample_weight_prior,
)
from lagindex.simulation import ScenarioSpec, simulate_cohort, true_effect
from lagindex.splines import evaluate_basis
from lagindex.study import run_study

SEC = time.perf_counter


def test_criterion_1_gaussian_sampler_matches_ridge_oracle():
    """Fixed weights and variance: posterior means hit the closed form."""
    start = SEC()
    spec = ScenarioSpec(scenario="equal", n=300, T=37, snr=1.0, replicates=1, seed=5)
    data = simulate_cohort(spec, 0).data
    fixed = np.full(3, 1.0 / 3.0)
    config = SamplerConfig(
        nu_mod=3, nu_time=3, iterations=20000, burn_in=0, seed=17,
        fixed_weights=fixed, fixed_sigma2=1.0,
    )
    draws = run_chain(data, config, chain_seed=17)
    psi = np.hstack([draws.theta, draws.gamma])

    mod_spec, _, C = model_geometry(data.n_times, config)
    B = evaluate_basis(mod_spec, modifier_index(data.M, fixed)).values
    U = assemble_design(build_cross_basis(time_contraction(data.X, C), B).W, data.Z)
    p = data.Z.shape[1]
    prior_prec = np.concatenate([
        np.full(9, 1.0 / config.priors.tau2), [0.0],
        np.full(p - 1, 1.0 / config.priors.xi2),
    ])
    oracle = ridge_posterior_mean(data.y, U, 1.0, prior_prec)

    se = psi.std(axis=0, ddof=1) / np.sqrt(psi.shape[0])
    z = np.abs(psi.mean(axis=0) - oracle) / se
    elapsed = SEC() - start
    print(f"\n  conjugacy: max |z| = {z.max():.3f} over {psi.shape[1]} "
          f"coordinates, {elapsed:.1f} s")
    assert z.max() <= 3.0
    assert elapsed < 120.0


def test_criterion_2_weight_kernels_recover_their_priors():
    """Constant likelihood: rho means hit 1/3; inclusion hits nu = 0.5."""
    samples = sample_weight_prior(3, iterations=50000, burn_in=2000, seed=29, q=1.0)
    rho = samples.rho
    z_rho = np.array([
        abs(rho[:, l].mean() - 1.0 / 3.0) / mcse(rho[:, l]) for l in range(3)
    ])
    print(f"\n  rho means {rho.mean(axis=0).round(5)} vs 1/3, |z| = {z_rho.round(2)}")
    assert np.all(z_rho <= 3.0)

    sel = sample_weight_prior(
        3, iterations=50000, burn_in=2000, seed=31, q=1.0, selection=True, nu=0.5
    )
    inc = sel.eta.mean(axis=0)
    for l in range(3):
        tol = 3.0 * mcse(sel.eta[:, l]) + 1e-12
        print(f"  inclusion[{l}] = {inc[l]:.6f} (tolerance {tol:.6f})")
        assert abs(inc[l] - 0.5) <= tol


def test_criterion_3_equal_weights_scenario_recovery():
    """20 replicates, n=500: accurate index, calibrated cumulative bands."""
    start = SEC()
    spec = ScenarioSpec(scenario="equal", n=500, T=37, snr=1.0, replicates=20, seed=101)
    config = SamplerConfig(iterations=5000, burn_in=2000, seed=0)
    study = run_study(spec, config, arms=("estimated",))
    agg = study.aggregated["estimated"]
    elapsed = SEC() - start
    print(f"\n  mean index RMSE = {agg.index_rmse:.5f} (cap 0.02), "
          f"CE coverage = {agg.cumulative.coverage:.3f} (range 0.85-0.99), "
          f"{elapsed / 60:.1f} min")
    assert agg.index_rmse <= 0.02
    assert 0.85 <= agg.cumulative.coverage <= 0.99
    assert elapsed < 1800.0


def test_criterion_4_estimated_weights_beat_fixed_equal():
    """Unequal truth (0.5, 0.4, 0.1): estimating the index wins per replicate."""
    spec = ScenarioSpec(
        scenario="different", n=500, T=37, snr=1.0, replicates=20, seed=202
    )
    config = SamplerConfig(iterations=5000, burn_in=2000, seed=0)
    study = run_study(spec, config, arms=("estimated", "fixed_equal"))
    est = np.array([s.index_rmse for s in study.scores["estimated"]])
    fixed = np.array([s.index_rmse for s in study.scores["fixed_equal"]])
    wins = int(np.sum(est < fixed))
    print(f"\n  estimated RMSE mean {est.mean():.5f} vs fixed {fixed.mean():.5f}; "
          f"wins {wins}/20 (need >= 18)")
    assert wins >= 18


def test_criterion_5_selection_separates_true_from_null_modifiers():
    """L=10 with 3 real modifiers: PIPs split cleanly at 0.5."""
    spec = ScenarioSpec(
        scenario="sparse", n=500, T=37, L=10, snr=1.0, replicates=20, seed=303
    )
    config = SamplerConfig(
        iterations=5000, burn_in=2000, seed=0,
        priors=PriorConfig(selection=True),
    )
    study = run_study(spec, config, arms=("estimated",))
    pips = np.array([w.pip for w in study.weights["estimated"]])
    true_mean = pips[:, :3].mean()
    null_mean = pips[:, 3:].mean()
    print(f"\n  mean PIP: true modifiers {true_mean:.3f} (> 0.5), "
          f"null modifiers {null_mean:.3f} (< 0.5)")
    assert true_mean > 0.5
    assert null_mean < 0.5


def test_criterion_6_latent_logistic_moments():
    """PG(1, c) sample means match tanh(c/2)/(2c) at several tilts."""
    start = SEC()
    rng = np.random.default_rng(55)
    for c in (0.0, 0.1, 1.0, 5.0):
        draws = polya_gamma_vector(np.full(10000, c), rng)
        target = 0.25 if c == 0.0 else np.tanh(c / 2.0) / (2.0 * c)
        z = abs(draws.mean() - target) / (draws.std(ddof=1) / 100.0)
        print(f"\n  c={c}: mean {draws.mean():.6f} vs {target:.6f}, |z| = {z:.2f}")
        assert z <= 3.0
    elapsed = SEC() - start
    assert elapsed < 10.0


def test_criterion_7_exact_identity_suite():
    """Algebraic identities hold to near machine precision, each in < 1 s."""
    g = np.random.default_rng(7)

    start = SEC()
    cfg = SamplerConfig(nu_mod=4, nu_time=5, iterations=10, burn_in=1)
    mod_spec, _, C = model_geometry(12, cfg)
    theta = g.normal(size=(200, 20))
    for m in (0.0, 0.37, 1.0):
        pw = pointwise_effect_draws(theta, m, mod_spec, C)
        ce = cumulative_effect_draws(theta, m, mod_spec, C)
        rel = np.abs(pw.sum(axis=1) - ce) / np.maximum(np.abs(ce), 1.0)
        assert rel.max() < 1e-10
    assert SEC() - start < 1.0

    start = SEC()
    flat_spec, _, C1 = model_geometry(12, SamplerConfig(nu_mod=1, nu_time=5,
                                                        iterations=10, burn_in=1))
    theta1 = g.normal(size=(50, 5))
    base = pointwise_effect_draws(theta1, 0.2, flat_spec, C1)
    for m in (0.5, 0.9):
        assert np.allclose(pointwise_effect_draws(theta1, m, flat_spec, C1),
                           base, atol=1e-12)
    assert SEC() - start < 1.0

    start = SEC()
    n, T, k_mod, k_time = 40, 9, 3, 4
    X = g.normal(size=(n, T))
    Ct = g.normal(size=(T, k_time))
    B = g.normal(size=(n, k_mod))
    W = build_cross_basis(time_contraction(X, Ct), B).W
    oracle = np.zeros((n, k_mod * k_time))
    for i in range(n):
        for k in range(k_mod):
            for j in range(k_time):
                oracle[i, k * k_time + j] = B[i, k] * sum(
                    X[i, t] * Ct[t, j] for t in range(T)
                )
    assert np.max(np.abs(W - oracle)) < 1e-12
    assert SEC() - start < 1.0

    start = SEC()
    truth = g.normal(size=12)
    draws = g.normal(size=(30, 12))
    score = cumulative_metrics(truth, draws, alpha=0.1)
    lo, hi = np.quantile(draws, (0.05, 0.95), axis=0)
    assert abs(score.rmse - np.sqrt(np.mean((truth - draws.mean(0)) ** 2))) < 1e-12
    assert abs(score.coverage - np.mean((truth >= lo) & (truth <= hi))) < 1e-12
    assert abs(score.width - np.mean(hi - lo)) < 1e-12
    rmse, bias = index_metrics(truth, draws.mean(0))
    assert abs(rmse - np.sqrt(np.mean((truth - draws.mean(0)) ** 2))) < 1e-12
    assert abs(bias - np.mean(np.abs(truth - draws.mean(0)))) < 1e-12
    surf_truth = g.normal(size=(6, 5))
    surf_draws = g.normal(size=(25, 6, 5))
    pw_score = pointwise_metrics(surf_truth, surf_draws, alpha=0.2)
    sq = cov = wid = 0.0
    for i in range(6):
        for t in range(5):
            cell = surf_draws[:, i, t]
            clo, chi = np.quantile(cell, (0.1, 0.9))
            sq += (surf_truth[i, t] - cell.mean()) ** 2
            cov += float(clo <= surf_truth[i, t] <= chi)
            wid += chi - clo
    assert abs(pw_score.rmse - np.sqrt(sq / 30.0)) < 1e-12
    assert abs(pw_score.coverage - cov / 30.0) < 1e-12
    assert abs(pw_score.width - wid / 30.0) < 1e-12
    assert SEC() - start < 1.0

    start = SEC()
    grid = np.linspace(0.01, 4.0, 25)
    for zeta in (0.05, 0.3, 1.7):
        for x in grid:
            for y in grid:
                fwd = folded_normal_logpdf(y, x, zeta)
                back = folded_normal_logpdf(x, y, zeta)
                assert abs(np.exp(fwd) - np.exp(back)) < 1e-12
    assert SEC() - start < 1.0


def test_criterion_8_true_surface_spot_values():
    """Analytic values of the data-generating effect surface."""
    ts = np.arange(1, 38, dtype=float)
    assert np.max(np.abs(true_effect(ts, 0.0))) < 1e-9

    peak_half = true_effect(18.5, 0.5)
    assert abs(peak_half - 0.5 * 2.5 / np.sqrt(2.0 * np.pi)) < 1e-9
    assert abs(peak_half - 0.498678) < 1e-6
    assert true_effect(18.5, 0.5) > true_effect(18.5 + 1e-3, 0.5)
    assert true_effect(18.5, 0.5) > true_effect(18.5 - 1e-3, 0.5)

    center_one = 37.0 / (1.0 + np.exp(-10.0))
    assert abs(center_one - 36.99832) < 1e-5
    assert abs(true_effect(center_one, 1.0) - 2.5 / np.sqrt(2.0 * np.pi)) < 1e-9
    print(f"\n  peak(m=0.5) = {peak_half:.6f} at t = 18.5; "
          f"center(m=1) = {center_one:.5f}")


def test_criterion_9_study_runner_is_byte_deterministic(tmp_path):
    """Same flags and seed twice: identical output trees, byte for byte."""
    def run(out):
        return cli.main([
            "simulate", "--scenario", "different", "--n", "60", "--t", "10",
            "--replicates", "3", "--iterations", "300", "--burn-in", "100",
            "--df-mod", "4", "--df-time", "4", "--seed", "99", "--emit-data",
            "--output", str(out),
        ])

    assert run(tmp_path / "a") == 0
    assert run(tmp_path / "b") == 0
    a = sorted(p.relative_to(tmp_path / "a")
               for p in (tmp_path / "a").rglob("*") if p.is_file())
    b = sorted(p.relative_to(tmp_path / "b")
               for p in (tmp_path / "b").rglob("*") if p.is_file())
    assert a == b and a
    diffs = [str(rel) for rel in a
             if (tmp_path / "a" / rel).read_bytes() != (tmp_path / "b" / rel).read_bytes()]
    print(f"\n  compared {len(a)} files, {len(diffs)} differ")
    assert diffs == []
