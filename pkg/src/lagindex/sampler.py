"""Metropolis-Hastings-within-Gibbs sampler for the index-modified DLM.

Each sweep: rebuild the cross-basis for the current weights, draw all
regression coefficients jointly from their Gaussian conditional (after a
Polya-Gamma augmentation draw for binomial responses), draw the error
variance, then update each unnormalized weight a_l by a folded-normal
random-walk move, or by the birth/death selection move when spike-slab
selection is on.  Proposal scales adapt toward a target acceptance rate
during burn-in and freeze afterwards.

Only the modifier basis depends on the weights, so a weight proposal costs
one basis evaluation and one row-wise product against the cached
time-contracted fit; the exposure contraction V = X C is never rebuilt.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .design import CohortData, IndexWeights
from .polya_gamma import polya_gamma_vector
from .priors import PriorConfig, SamplerState, init_state
from .splines import BasisEvaluator, evaluate_basis, make_spec
from .validation import NumericalError, ValidationError

__all__ = [
    "SamplerConfig",
    "PosteriorDraws",
    "ChainError",
    "log_likelihood",
    "folded_normal_logpdf",
    "ridge_posterior_mean",
    "gibbs_update_coefficients",
    "gibbs_update_variance",
    "gibbs_update_logistic",
    "mh_update_weight",
    "selection_update_weight",
    "adapt_proposal_scale",
    "model_geometry",
    "run_chain",
    "run_multichain",
    "sample_weight_prior",
]


@dataclass
class SamplerConfig:
    nu_mod: int = 5
    nu_time: int = 5
    iterations: int = 5000
    burn_in: int = 2000
    thin: int = 1
    chains: int = 1
    seed: int = 0
    priors: PriorConfig = field(default_factory=PriorConfig)
    adapt_target: float = 0.44
    adapt_window: int = 50
    random_scan: bool = False
    update_weights: bool = True
    fixed_weights: np.ndarray | None = None
    fixed_sigma2: float | None = None
    debug_checks: bool = False

    def __post_init__(self):
        for name in ("nu_mod", "nu_time", "iterations", "thin", "chains", "adapt_window"):
            v = getattr(self, name)
            if int(v) != v or v < 1:
                raise ValidationError(f"{name} must be a positive integer, got {v!r}")
            setattr(self, name, int(v))
        if int(self.burn_in) != self.burn_in or self.burn_in < 0:
            raise ValidationError(f"burn_in must be a non-negative integer, got {self.burn_in!r}")
        self.burn_in = int(self.burn_in)
        if self.burn_in >= self.iterations:
            raise ValidationError(
                f"burn_in ({self.burn_in}) must be smaller than iterations ({self.iterations})"
            )
        if not 0.0 < self.adapt_target < 1.0:
            raise ValidationError(f"adapt_target must be in (0, 1), got {self.adapt_target!r}")
        if self.fixed_weights is not None:
            self.fixed_weights = np.asarray(self.fixed_weights, dtype=float)
            self.update_weights = False
        if self.fixed_sigma2 is not None and self.fixed_sigma2 <= 0.0:
            raise ValidationError("fixed_sigma2 must be positive")

    @property
    def draws_per_chain(self) -> int:
        return (self.iterations - self.burn_in) // self.thin


@dataclass
class PosteriorDraws:
    """Stored draws for one chain (or a pooled set, chain_id = -1)."""

    theta: np.ndarray
    gamma: np.ndarray
    sigma2: np.ndarray | None
    a: np.ndarray
    eta: np.ndarray
    iteration: np.ndarray
    chain_id: int
    accept_count: np.ndarray
    attempt_count: np.ndarray
    swap_accept_count: np.ndarray
    swap_attempt_count: np.ndarray
    empty_death_rejects: int = 0
    zeta_final: np.ndarray | None = None
    zeta_frozen: np.ndarray | None = None

    @property
    def n_draws(self) -> int:
        return self.theta.shape[0]

    @property
    def rho(self) -> np.ndarray:
        totals = self.a.sum(axis=1, keepdims=True)
        if np.any(totals <= 0.0):
            raise ValidationError("a draw with all weights zero cannot be normalized")
        return self.a / totals

    @classmethod
    def pool(cls, chains: list["PosteriorDraws"]) -> "PosteriorDraws":
        if not chains:
            raise ValidationError("no chains to pool")
        if len(chains) == 1:
            return chains[0]
        sig = None
        if chains[0].sigma2 is not None:
            sig = np.concatenate([c.sigma2 for c in chains])
        return cls(
            theta=np.concatenate([c.theta for c in chains]),
            gamma=np.concatenate([c.gamma for c in chains]),
            sigma2=sig,
            a=np.concatenate([c.a for c in chains]),
            eta=np.concatenate([c.eta for c in chains]),
            iteration=np.concatenate([c.iteration for c in chains]),
            chain_id=-1,
            accept_count=np.sum([c.accept_count for c in chains], axis=0),
            attempt_count=np.sum([c.attempt_count for c in chains], axis=0),
            swap_accept_count=np.sum([c.swap_accept_count for c in chains], axis=0),
            swap_attempt_count=np.sum([c.swap_attempt_count for c in chains], axis=0),
            empty_death_rejects=sum(c.empty_death_rejects for c in chains),
        )


class ChainError(NumericalError):
    def __init__(self, failures, completed):
        ids = ", ".join(str(i) for i, _ in failures)
        first = failures[0][1]
        super().__init__(f"chain(s) {ids} failed: {first}")
        self.failures = failures
        self.completed = completed


def log_likelihood(y, U, psi, sigma2, family: str) -> float:
    """Full-data log likelihood at the linear predictor U psi."""
    eta = U @ psi
    if family == "gaussian":
        resid = y - eta
        n = y.size
        return -0.5 * (n * math.log(2.0 * math.pi * sigma2) + resid @ resid / sigma2)
    if family == "binomial":
        # log(1 + e^eta) via logaddexp stays finite for |eta| in the hundreds
        return float(y @ eta - np.logaddexp(0.0, eta).sum())
    raise ValidationError(f"unknown family {family!r}")


def folded_normal_logpdf(x: float, center: float, scale: float) -> float:
    """log density of |N(center, scale^2)| at x >= 0; symmetric in (x, center)."""
    if x < 0.0:
        return -math.inf
    z1 = (x - center) / scale
    z2 = (x + center) / scale
    base = -0.5 * math.log(2.0 * math.pi) - math.log(scale)
    # log-sum-exp keeps far tails finite where both exponentials underflow
    a, b = -0.5 * z1 * z1, -0.5 * z2 * z2
    hi, lo = (a, b) if a >= b else (b, a)
    return base + hi + math.log1p(math.exp(lo - hi))


def _draw_mvn_precision(A: np.ndarray, b: np.ndarray, rng: np.random.Generator):
    """Draw from N(A^-1 b, A^-1); returns (draw, mean)."""
    try:
        chol = scipy.linalg.cholesky(A, lower=True, check_finite=False)
    except scipy.linalg.LinAlgError:
        cond = float(np.linalg.cond(A))
        raise NumericalError(
            f"singular coefficient precision (condition number {cond:.3e}); "
            f"check for collinear covariates or excessive basis dimension"
        ) from None
    w = scipy.linalg.solve_triangular(chol, b, lower=True, check_finite=False)
    mean = scipy.linalg.solve_triangular(chol, w, lower=True, trans="T", check_finite=False)
    z = rng.standard_normal(b.size)
    return mean + scipy.linalg.solve_triangular(chol, z, lower=True, trans="T", check_finite=False), mean


def ridge_posterior_mean(y, U, sigma2, prior_prec) -> np.ndarray:
    """Closed-form conditional mean (U'U/s2 + P)^-1 U'y / s2."""
    A = U.T @ U / sigma2
    A[np.diag_indices_from(A)] += prior_prec
    return np.linalg.solve(A, U.T @ y / sigma2)


def gibbs_update_coefficients(y, U, sigma2, prior_prec, rng) -> np.ndarray:
    A = U.T @ U / sigma2
    A[np.diag_indices_from(A)] += prior_prec
    draw, _ = _draw_mvn_precision(A, U.T @ y / sigma2, rng)
    return draw


def gibbs_update_variance(rss: float, n: int, priors: PriorConfig, rng) -> float:
    shape = priors.ig_shape + 0.5 * n
    scale = priors.ig_scale + 0.5 * rss
    return scale / rng.gamma(shape)


def logistic_conditional(U, kappa, omega, prior_prec):
    """Precision and shift of psi | omega; exposed for the reduction test."""
    A = U.T @ (U * omega[:, None])
    A[np.diag_indices_from(A)] += prior_prec
    return A, U.T @ kappa


def gibbs_update_logistic(y, U, psi, prior_prec, rng):
    """Polya-Gamma augmentation: omega | psi, then psi | omega."""
    eta = U @ psi
    omega = polya_gamma_vector(eta, rng)
    A, b = logistic_conditional(U, y - 0.5, omega, prior_prec)
    draw, _ = _draw_mvn_precision(A, b, rng)
    return draw, omega


def adapt_proposal_scale(zeta_l: float, rate: float, iteration: int, target: float) -> float:
    """Robbins-Monro step on log zeta toward the target acceptance rate."""
    step = min(0.05, iteration ** -0.5)
    return zeta_l * math.exp(step * (rate - target))


@dataclass
class WeightCounters:
    mh_attempt: np.ndarray
    mh_accept: np.ndarray
    window_attempt: np.ndarray
    window_accept: np.ndarray
    swap_attempt: np.ndarray
    swap_accept: np.ndarray
    empty_death_rejects: int = 0

    @classmethod
    def zeros(cls, L: int) -> "WeightCounters":
        return cls(
            mh_attempt=np.zeros(L, dtype=np.int64),
            mh_accept=np.zeros(L, dtype=np.int64),
            window_attempt=np.zeros(L, dtype=np.int64),
            window_accept=np.zeros(L, dtype=np.int64),
            swap_attempt=np.zeros(L, dtype=np.int64),
            swap_accept=np.zeros(L, dtype=np.int64),
        )


class _NullLikelihood:
    """Constant likelihood; turns the weight kernels into prior samplers."""

    def delta_loglik(self, l, new_al):
        return 0.0, None

    def commit(self, l, new_al, cache):
        pass


def _accept(log_r: float, rng: np.random.Generator) -> bool:
    if log_r >= 0.0:
        return True
    return rng.random() < math.exp(log_r)


def _renormalize(weights: IndexWeights) -> None:
    total = weights.a.sum()
    if total > 0.0:
        np.divide(weights.a, total, out=weights.rho)
    else:
        weights.rho.fill(0.0)


def mh_update_weight(l, weights, zeta, q, likelihood, rng, counters=None) -> bool:
    """Folded-normal random-walk move on a_l; returns acceptance."""
    a_l = weights.a[l]
    prop = abs(rng.normal(a_l, zeta[l]))
    if counters is not None:
        counters.mh_attempt[l] += 1
        counters.window_attempt[l] += 1
    if prop <= 0.0:
        return False
    delta, cache = likelihood.delta_loglik(l, prop)
    log_r = -(prop - a_l) + delta
    if q[l] != 1.0:
        log_r += (q[l] - 1.0) * (math.log(prop) - math.log(a_l))
    if not _accept(log_r, rng):
        return False
    weights.a[l] = prop
    _renormalize(weights)
    likelihood.commit(l, prop, cache)
    if counters is not None:
        counters.mh_accept[l] += 1
        counters.window_accept[l] += 1
    return True


def selection_update_weight(
    l, weights, zeta, q, nu, likelihood, rng, counters=None, allow_empty=False
) -> None:
    """Birth/death move between the spike and the slab for weight l.

    Birth proposes from the slab so the Gamma terms cancel; death proposes
    the spike point mass.  A rejected death falls back to the folded-normal
    within-model move.  A death that would empty the index entirely is
    auto-rejected (and counted) unless allow_empty is set.
    """
    a_l = weights.a[l]
    if a_l == 0.0:
        prop = rng.gamma(q[l])
        if counters is not None:
            counters.swap_attempt[l] += 1
        delta, cache = likelihood.delta_loglik(l, prop)
        log_r = math.log(nu[l]) - math.log1p(-nu[l]) + delta
        if prop > 0.0 and _accept(log_r, rng):
            weights.a[l] = prop
            weights.eta[l] = 1.0
            _renormalize(weights)
            likelihood.commit(l, prop, cache)
            if counters is not None:
                counters.swap_accept[l] += 1
        return
    if counters is not None:
        counters.swap_attempt[l] += 1
    last_active = np.count_nonzero(weights.a) == 1
    if last_active and not allow_empty:
        if counters is not None:
            counters.empty_death_rejects += 1
    else:
        delta, cache = likelihood.delta_loglik(l, 0.0)
        log_r = math.log1p(-nu[l]) - math.log(nu[l]) + delta
        if _accept(log_r, rng):
            weights.a[l] = 0.0
            weights.eta[l] = 0.0
            _renormalize(weights)
            likelihood.commit(l, 0.0, cache)
            if counters is not None:
                counters.swap_accept[l] += 1
            return
    mh_update_weight(l, weights, zeta, q, likelihood, rng, counters)


def model_geometry(n_times: int, config: SamplerConfig):
    """Spline specs and the time basis C shared by the sampler and summaries."""
    grid = np.arange(1.0, n_times + 1.0)
    mod_spec = make_spec(config.nu_mod, (0.0, 1.0), "equally_spaced")
    time_spec = make_spec(config.nu_time, (1.0, float(n_times)), "quantiles", values=grid)
    C = evaluate_basis(time_spec, grid).values
    return mod_spec, time_spec, C


class _Chain:
    def __init__(self, data: CohortData, config: SamplerConfig, chain_seed: int, chain_id: int):
        self.data = data
        self.config = config
        self.chain_id = chain_id
        self.rng = np.random.default_rng(chain_seed)
        self.L = data.n_modifiers
        self.n = data.n
        self.jk = config.nu_mod * config.nu_time
        self.p = data.n_covariates
        self.mod_spec, self.time_spec, self.C = model_geometry(data.n_times, config)
        self.mod_eval = BasisEvaluator(self.mod_spec)
        self.V = data.X @ self.C
        self.q = config.priors.q_vector(self.L)
        self.nu = config.priors.inclusion_vector(self.L)
        self.prior_prec = np.concatenate([
            np.full(self.jk, 1.0 / config.priors.tau2),
            [0.0],
            np.full(self.p - 1, 1.0 / config.priors.xi2),
        ])
        self.state = init_state(data, config, self.rng)
        if config.fixed_sigma2 is not None:
            self.state.sigma2 = float(config.fixed_sigma2)
        self.psi = np.concatenate([self.state.theta, self.state.gamma])
        self.U = np.empty((self.n, self.jk + self.p))
        self.U[:, self.jk:] = data.Z
        self.m_star = np.clip(data.M @ self.state.weights.rho, 0.0, 1.0)
        self.B = self.mod_eval(self.m_star)
        self.counters = WeightCounters.zeros(self.L)
        self.T_mat = None
        self.z_part = None
        self.fitted = None
        self.rss = None
        self.bin_ll = None

    # -- likelihood adapter used by the weight kernels ------------------

    def delta_loglik(self, l, new_al):
        a = self.state.weights.a
        rho = a.copy()
        rho[l] = new_al
        total = rho.sum()
        if total <= 0.0:
            return -math.inf, None
        rho /= total
        m_new = np.clip(self.data.M @ rho, 0.0, 1.0)
        B_new = self.mod_eval(m_new)
        fitted_new = self.z_part + (B_new * self.T_mat).sum(axis=1)
        if self.data.family == "gaussian":
            resid = self.data.y - fitted_new
            rss_new = resid @ resid
            delta = -(rss_new - self.rss) / (2.0 * self.state.sigma2)
            return delta, (m_new, B_new, fitted_new, rss_new)
        ll_new = float(self.data.y @ fitted_new - np.logaddexp(0.0, fitted_new).sum())
        return ll_new - self.bin_ll, (m_new, B_new, fitted_new, ll_new)

    def commit(self, l, new_al, cache):
        m_new, B_new, fitted_new, stat = cache
        self.m_star = m_new
        self.B = B_new
        self.fitted = fitted_new
        if self.data.family == "gaussian":
            self.rss = stat
        else:
            self.bin_ll = stat

    # -- sweep pieces ----------------------------------------------------

    def _rebuild_design(self):
        n, nu_mod = self.B.shape
        self.U[:, : self.jk] = (self.B[:, :, None] * self.V[:, None, :]).reshape(n, self.jk)

    def _update_coefficients(self):
        if self.data.family == "gaussian":
            self.psi = gibbs_update_coefficients(
                self.data.y, self.U, self.state.sigma2, self.prior_prec, self.rng
            )
        else:
            self.psi, omega = gibbs_update_logistic(
                self.data.y, self.U, self.psi, self.prior_prec, self.rng
            )
            self.state.omega = omega
        self.state.theta = self.psi[: self.jk]
        self.state.gamma = self.psi[self.jk:]

    def _refresh_fit_caches(self):
        theta2d = self.state.theta.reshape(self.config.nu_mod, self.config.nu_time)
        self.T_mat = self.V @ theta2d.T
        self.z_part = self.data.Z @ self.state.gamma
        self.fitted = self.z_part + (self.B * self.T_mat).sum(axis=1)
        if self.data.family == "gaussian":
            resid = self.data.y - self.fitted
            self.rss = resid @ resid
        else:
            self.bin_ll = float(
                self.data.y @ self.fitted - np.logaddexp(0.0, self.fitted).sum()
            )

    def _debug_verify(self):
        rho = self.state.weights.rho
        m = np.clip(self.data.M @ rho, 0.0, 1.0)
        assert np.allclose(m, self.m_star, atol=1e-10), "cached index out of sync"
        assert np.allclose(self.mod_eval(m), self.B, atol=1e-10), "cached basis out of sync"

    def run(self) -> PosteriorDraws:
        cfg = self.config
        data = self.data
        state = self.state
        n_draws = cfg.draws_per_chain
        theta_out = np.empty((n_draws, self.jk))
        gamma_out = np.empty((n_draws, self.p))
        sigma_out = np.empty(n_draws) if data.family == "gaussian" else None
        a_out = np.empty((n_draws, self.L))
        eta_out = np.empty((n_draws, self.L))
        iter_out = np.empty(n_draws, dtype=np.int64)
        zeta_frozen = state.zeta.copy()
        keep = 0
        update_sigma = data.family == "gaussian" and cfg.fixed_sigma2 is None
        for s in range(1, cfg.iterations + 1):
            self._rebuild_design()
            self._update_coefficients()
            self._refresh_fit_caches()
            if update_sigma:
                state.sigma2 = gibbs_update_variance(self.rss, self.n, cfg.priors, self.rng)
            if cfg.update_weights:
                order = self.rng.permutation(self.L) if cfg.random_scan else range(self.L)
                for l in order:
                    if cfg.priors.selection:
                        selection_update_weight(
                            l, state.weights, state.zeta, self.q, self.nu,
                            self, self.rng, self.counters,
                        )
                    else:
                        mh_update_weight(
                            l, state.weights, state.zeta, self.q, self, self.rng, self.counters
                        )
            if s <= cfg.burn_in and s % cfg.adapt_window == 0:
                for l in range(self.L):
                    att = self.counters.window_attempt[l]
                    if att > 0:
                        rate = self.counters.window_accept[l] / att
                        state.zeta[l] = adapt_proposal_scale(
                            state.zeta[l], rate, s, cfg.adapt_target
                        )
                self.counters.window_attempt.fill(0)
                self.counters.window_accept.fill(0)
            if s == cfg.burn_in:
                zeta_frozen = state.zeta.copy()
            if cfg.debug_checks and s % 1000 == 0:
                self._debug_verify()
            if s > cfg.burn_in and (s - cfg.burn_in) % cfg.thin == 0 and keep < n_draws:
                theta_out[keep] = state.theta
                gamma_out[keep] = state.gamma
                if sigma_out is not None:
                    sigma_out[keep] = state.sigma2
                a_out[keep] = state.weights.a
                eta_out[keep] = state.weights.eta
                iter_out[keep] = s
                keep += 1
        return PosteriorDraws(
            theta=theta_out,
            gamma=gamma_out,
            sigma2=sigma_out,
            a=a_out,
            eta=eta_out,
            iteration=iter_out,
            chain_id=self.chain_id,
            accept_count=self.counters.mh_accept.copy(),
            attempt_count=self.counters.mh_attempt.copy(),
            swap_accept_count=self.counters.swap_accept.copy(),
            swap_attempt_count=self.counters.swap_attempt.copy(),
            empty_death_rejects=int(self.counters.empty_death_rejects),
            zeta_final=state.zeta.copy(),
            zeta_frozen=zeta_frozen,
        )


def run_chain(
    data: CohortData, config: SamplerConfig, chain_seed: int | None = None, chain_id: int = 0
) -> PosteriorDraws:
    if chain_seed is None:
        chain_seed = config.seed
    if config.fixed_weights is not None and config.fixed_weights.size != data.n_modifiers:
        raise ValidationError(
            f"fixed_weights has length {config.fixed_weights.size}, "
            f"but the cohort has {data.n_modifiers} modifiers"
        )
    return _Chain(data, config, chain_seed, chain_id).run()


def run_multichain(data: CohortData, config: SamplerConfig) -> list[PosteriorDraws]:
    """Run config.chains independent chains with seeds seed + chain index."""
    results: list[PosteriorDraws] = []
    failures: list[tuple[int, Exception]] = []
    for c in range(config.chains):
        try:
            results.append(run_chain(data, config, chain_seed=config.seed + c, chain_id=c))
        except NumericalError as exc:
            failures.append((c, exc))
    if failures:
        raise ChainError(failures, results)
    return results


@dataclass
class PriorSamples:
    a: np.ndarray
    eta: np.ndarray
    counters: WeightCounters

    @property
    def rho(self) -> np.ndarray:
        totals = self.a.sum(axis=1, keepdims=True)
        return np.divide(self.a, totals, out=np.zeros_like(self.a), where=totals > 0.0)


def sample_weight_prior(
    L: int,
    iterations: int,
    seed: int = 0,
    q=1.0,
    selection: bool = False,
    nu=0.5,
    burn_in: int = 0,
    zeta0: float = 0.1,
    adapt_target: float = 0.44,
    adapt_window: int = 50,
    allow_empty: bool | None = None,
) -> PriorSamples:
    """Run the weight kernels against a constant likelihood.

    Recovers the Dirichlet(q) prior of rho (selection off) or the
    Bernoulli(nu) inclusion prior (selection on).  With selection on the
    empty state is allowed by default: nothing evaluates rho here, and the
    all-zero guard of real fits would condition the prior on a non-empty
    index and shift the inclusion marginals.
    """
    rng = np.random.default_rng(seed)
    priors = PriorConfig(q=q, inclusion_prob=nu, selection=selection)
    qv = priors.q_vector(L)
    nuv = priors.inclusion_vector(L)
    a0 = np.maximum(rng.gamma(shape=qv, scale=1.0), 1e-12)
    weights = IndexWeights.from_unnormalized(a0)
    zeta = np.full(L, zeta0)
    counters = WeightCounters.zeros(L)
    null = _NullLikelihood()
    if allow_empty is None:
        allow_empty = selection
    total = burn_in + iterations
    a_out = np.empty((iterations, L))
    eta_out = np.empty((iterations, L))
    for s in range(1, total + 1):
        for l in range(L):
            if selection:
                selection_update_weight(
                    l, weights, zeta, qv, nuv, null, rng, counters, allow_empty=allow_empty
                )
            else:
                mh_update_weight(l, weights, zeta, qv, null, rng, counters)
        if s <= burn_in and s % adapt_window == 0:
            for l in range(L):
                att = counters.window_attempt[l]
                if att > 0:
                    zeta[l] = adapt_proposal_scale(
                        zeta[l], counters.window_accept[l] / att, s, adapt_target
                    )
            counters.window_attempt.fill(0)
            counters.window_accept.fill(0)
        if s > burn_in:
            a_out[s - burn_in - 1] = weights.a
            eta_out[s - burn_in - 1] = weights.eta
    return PriorSamples(a=a_out, eta=eta_out, counters=counters)
