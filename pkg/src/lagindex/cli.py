"""Command line front end.

Three subcommands:

* ``fit``        run the sampler on cohort CSVs and write draws + summaries
* ``simulate``   run the replicate study for one scenario cell
* ``summarize``  recompute the summary CSVs from a saved draws directory

Settings resolve in three layers: built-in defaults, then an INI config
file (``--config``), then explicit flags. Every run writes a
``manifest.ini`` that echoes the resolved settings (never the output
path or a timestamp) so identical inputs give byte-identical output
trees. Exit codes: 0 success, 2 invalid input, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__, dataio
from .design import CohortData, modifier_index
from .posterior import (
    effect_grid,
    summarize_effects,
    summarize_weights,
    windows_of_susceptibility,
)
from .priors import PriorConfig
from .sampler import PosteriorDraws, SamplerConfig, model_geometry, run_multichain
from .simulation import ScenarioSpec, simulate_cohort
from .study import ARMS, run_study
from .validation import NumericalError, ValidationError

# name -> (type tag, default); single source of truth for config-file
# parsing, flag defaults, and the manifest echo
_SETTINGS: dict[str, tuple[str, object]] = {
    "iterations": ("int", 5000),
    "burn_in": ("int", 2000),
    "thin": ("int", 1),
    "chains": ("int", 1),
    "seed": ("int", 0),
    "df_mod": ("int", 5),
    "df_time": ("int", 5),
    "family": ("str", "gaussian"),
    "selection": ("bool", False),
    "q": ("float", 1.0),
    "tau2": ("float", 100.0),
    "xi2": ("float", 110.0),
    "ig_shape": ("float", 1.0),
    "ig_scale": ("float", 0.001),
    "inclusion_prob": ("float", 0.5),
    "adapt_target": ("float", 0.44),
    "adapt_window": ("int", 50),
    "random_scan": ("bool", False),
    "alpha": ("float", 0.05),
    "grid_points": ("int", 101),
    "percentiles": ("floats", (25.0, 50.0, 75.0)),
    "scale_modifiers": ("bool", False),
    "plots": ("bool", False),
    "scenario": ("str", "equal"),
    "snr": ("float", 1.0),
    "n": ("int", 500),
    "replicates": ("int", 20),
    "modifiers_count": ("int", 3),
    "n_times": ("int", 37),
    "arms": ("str", ",".join(ARMS)),
    "emit_data": ("bool", False),
    "pool_replace": ("bool", True),
    "jobs": ("int", 1),
}

_PATH_KEYS = ("response", "exposure", "modifiers", "covariates", "data", "exposure_pool")
_ROLE_KEYS = ("response", "exposure", "modifier", "covariate")


def _parse_setting(key: str, raw: str):
    kind = _SETTINGS[key][0]
    raw = raw.strip()
    try:
        if kind == "int":
            return int(raw)
        if kind == "float":
            return float(raw)
        if kind == "floats":
            return tuple(float(v) for v in raw.split(",") if v.strip())
        if kind == "bool":
            low = raw.lower()
            if low in ("1", "true", "yes", "on"):
                return True
            if low in ("0", "false", "no", "off"):
                return False
            raise ValueError(raw)
    except ValueError:
        raise ValidationError(f"setting {key}: cannot parse {raw!r} as {kind}") from None
    return raw


def _echo_setting(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (tuple, list)):
        return ",".join(repr(float(v)) for v in value)
    return str(value)


def _read_config(path: Path):
    if not path.exists():
        raise ValidationError(f"config file not found: {path}")
    sections = dataio.read_manifest(path)
    unknown = set(sections) - {"run", "data", "roles"}
    if unknown:
        raise ValidationError(f"{path}: unknown config section(s) {sorted(unknown)}")
    settings, paths, roles = {}, {}, {}
    for key, raw in sections.get("run", {}).items():
        if key not in _SETTINGS:
            raise ValidationError(f"{path}: unknown setting {key!r} in [run]")
        settings[key] = _parse_setting(key, raw)
    for key, raw in sections.get("data", {}).items():
        if key not in _PATH_KEYS:
            raise ValidationError(f"{path}: unknown entry {key!r} in [data]")
        paths[key] = raw.strip()
    for key, raw in sections.get("roles", {}).items():
        if key not in _ROLE_KEYS:
            raise ValidationError(f"{path}: unknown role {key!r} (use one of {_ROLE_KEYS})")
        roles[key] = raw.strip()
    return settings, paths, roles


def resolve_settings(args) -> tuple[dict, dict, dict]:
    """defaults < config file < command line flags"""
    settings = {k: default for k, (_, default) in _SETTINGS.items()}
    paths: dict[str, str | None] = {k: None for k in _PATH_KEYS}
    roles: dict[str, str] = {}
    if getattr(args, "config", None):
        file_settings, file_paths, file_roles = _read_config(Path(args.config))
        settings.update(file_settings)
        paths.update(file_paths)
        roles.update(file_roles)
    for key in _SETTINGS:
        v = getattr(args, key, None)
        if v is not None:
            settings[key] = _parse_setting(key, v) if isinstance(v, str) else v
    for key in _PATH_KEYS:
        v = getattr(args, key, None)
        if v is not None:
            paths[key] = str(v)
    for entry in getattr(args, "role", None) or []:
        if "=" not in entry:
            raise ValidationError(f"--role needs NAME=COLUMNS, got {entry!r}")
        name, expr = entry.split("=", 1)
        name = name.strip()
        if name not in _ROLE_KEYS:
            raise ValidationError(f"unknown role {name!r} (use one of {_ROLE_KEYS})")
        roles[name] = expr.strip()
    return settings, paths, roles


def _sampler_config(settings: dict) -> SamplerConfig:
    priors = PriorConfig(
        q=settings["q"],
        tau2=settings["tau2"],
        xi2=settings["xi2"],
        ig_shape=settings["ig_shape"],
        ig_scale=settings["ig_scale"],
        inclusion_prob=settings["inclusion_prob"],
        selection=settings["selection"],
    )
    return SamplerConfig(
        nu_mod=settings["df_mod"],
        nu_time=settings["df_time"],
        iterations=settings["iterations"],
        burn_in=settings["burn_in"],
        thin=settings["thin"],
        chains=settings["chains"],
        seed=settings["seed"],
        priors=priors,
        adapt_target=settings["adapt_target"],
        adapt_window=settings["adapt_window"],
        random_scan=settings["random_scan"],
    )


def _resolve_outdir(args) -> Path:
    if getattr(args, "output", None):
        return Path(args.output)
    root = os.environ.get("LAGINDEX_OUT")
    if root:
        return Path(root) / args.command
    raise ValidationError("no output directory: pass --output or set LAGINDEX_OUT")


def _minmax_scale(M: np.ndarray) -> np.ndarray:
    lo, hi = M.min(axis=0), M.max(axis=0)
    flat = hi - lo <= 0.0
    if np.any(flat):
        raise ValidationError(
            f"modifier column(s) {np.flatnonzero(flat).tolist()} are constant; cannot rescale"
        )
    return (M - lo) / (hi - lo)


def _load_fit_data(settings: dict, paths: dict, roles: dict):
    if paths["data"]:
        header, table = dataio.read_matrix_csv(paths["data"])
        for need in ("response", "exposure", "modifier"):
            if need not in roles:
                raise ValidationError(f"--data requires a --role {need}=COLUMNS mapping")
        y_cols = dataio.expand_columns(roles["response"])
        if len(y_cols) != 1:
            raise ValidationError(f"the response role must name one column, got {y_cols}")
        y = dataio.select_columns(header, table, y_cols, paths["data"])[:, 0]
        X = dataio.select_columns(
            header, table, dataio.expand_columns(roles["exposure"]), paths["data"]
        )
        mod_names = dataio.expand_columns(roles["modifier"])
        M = dataio.select_columns(header, table, mod_names, paths["data"])
        covariates = None
        if "covariate" in roles:
            covariates = dataio.select_columns(
                header, table, dataio.expand_columns(roles["covariate"]), paths["data"]
            )
    else:
        missing = [k for k in ("response", "exposure", "modifiers") if not paths[k]]
        if missing:
            raise ValidationError(
                "fit needs --data with --role mappings, or --response/--exposure/--modifiers "
                f"files (missing: {', '.join(missing)})"
            )
        yh, ytab = dataio.read_matrix_csv(paths["response"])
        if ytab.shape[1] != 1:
            raise ValidationError(f"{paths['response']}: response file must have one column")
        y = ytab[:, 0]
        _, X = dataio.read_matrix_csv(paths["exposure"])
        mod_names, M = dataio.read_matrix_csv(paths["modifiers"])
        covariates = None
        if paths["covariates"]:
            _, covariates = dataio.read_matrix_csv(paths["covariates"])
    if settings["scale_modifiers"]:
        M = _minmax_scale(M)
    data = CohortData.assemble(y=y, X=X, M=M, covariates=covariates, family=settings["family"])
    return data, list(mod_names)


def _weight_rows(ws) -> list[list[str]]:
    f = dataio.fmt_float
    return [
        [name, f(ws.rho_mean[l]), f(ws.rho_sd[l]), f(ws.pip[l])]
        for l, name in enumerate(ws.names)
    ]


def write_summary_files(outdir: Path, pooled: PosteriorDraws, config: SamplerConfig,
                        n_times: int, m_hat: np.ndarray, names, settings: dict):
    """Posterior summary CSVs; shared by fit and summarize so a re-run of
    summarize on a fit directory reproduces the same bytes."""
    mod_spec, time_spec, C = model_geometry(n_times, config)
    percentiles = np.asarray(settings["percentiles"], dtype=float)
    perc_values = np.percentile(m_hat, percentiles) if percentiles.size else np.empty(0)
    grid = np.unique(np.concatenate([effect_grid(settings["grid_points"]), perc_values]))
    summary = summarize_effects(pooled.theta, grid, mod_spec, C, alpha=settings["alpha"])

    pw_rows = np.empty((grid.size * n_times, 5))
    for g in range(grid.size):
        rows = slice(g * n_times, (g + 1) * n_times)
        pw_rows[rows, 0] = grid[g]
        pw_rows[rows, 1] = np.arange(1, n_times + 1)
        pw_rows[rows, 2] = summary.pointwise_mean[g]
        pw_rows[rows, 3] = summary.pointwise_lower[g]
        pw_rows[rows, 4] = summary.pointwise_upper[g]
    dataio.write_matrix_csv(
        outdir / "pointwise.csv", ["m_star", "t", "mean", "lower", "upper"], pw_rows
    )
    dataio.write_matrix_csv(
        outdir / "cumulative.csv",
        ["m_star", "mean", "lower", "upper"],
        np.column_stack([grid, summary.cumulative_mean,
                         summary.cumulative_lower, summary.cumulative_upper]),
    )
    ws = summarize_weights(pooled.a, pooled.eta, names)
    dataio.write_table_csv(
        outdir / "weights.csv", ["modifier", "rho_mean", "rho_sd", "pip"], _weight_rows(ws)
    )
    window_rows = []
    for value in perc_values:
        for w in windows_of_susceptibility(summary, value):
            window_rows.append(
                [dataio.fmt_float(w.m_star), str(w.t_start), str(w.t_end), w.sign]
            )
    dataio.write_table_csv(
        outdir / "windows.csv", ["m_star", "t_start", "t_end", "sign"], window_rows
    )
    if settings["plots"]:
        from . import plots

        plots.save_effect_plots(outdir, summary)
    return summary, ws


def _counter_entries(chains: list[PosteriorDraws], selection: bool) -> dict:
    result: dict[str, str] = {}
    for c in chains:
        tag = f"chain_{c.chain_id}"
        result[f"{tag}_weight_accepts"] = ",".join(str(v) for v in c.accept_count)
        result[f"{tag}_weight_attempts"] = ",".join(str(v) for v in c.attempt_count)
        if c.attempt_count.sum() > 0:
            rates = c.accept_count / np.maximum(c.attempt_count, 1)
            result[f"{tag}_weight_accept_rates"] = ",".join(repr(float(r)) for r in rates)
        if selection:
            result[f"{tag}_swap_accepts"] = ",".join(str(v) for v in c.swap_accept_count)
            result[f"{tag}_swap_attempts"] = ",".join(str(v) for v in c.swap_attempt_count)
            result[f"{tag}_empty_death_rejects"] = str(c.empty_death_rejects)
    return result


def _run_echo(settings: dict) -> dict:
    return {key: _echo_setting(settings[key]) for key in _SETTINGS}


def cmd_fit(settings: dict, paths: dict, roles: dict, outdir: Path) -> int:
    data, names = _load_fit_data(settings, paths, roles)
    config = _sampler_config(settings)
    chains = run_multichain(data, config)
    outdir.mkdir(parents=True, exist_ok=True)
    for chain in chains:
        dataio.write_draws_csv(outdir / f"draws_chain{chain.chain_id}.csv", chain)
        ws_c = summarize_weights(chain.a, chain.eta, names)
        dataio.write_table_csv(
            outdir / f"weights_chain{chain.chain_id}.csv",
            ["modifier", "rho_mean", "rho_sd", "pip"],
            _weight_rows(ws_c),
        )
    pooled = PosteriorDraws.pool(chains)
    ws = summarize_weights(pooled.a, pooled.eta, names)
    m_hat = modifier_index(data.M, ws.rho_mean)
    dataio.write_matrix_csv(outdir / "index.csv", ["m_hat"], m_hat[:, None])
    write_summary_files(outdir, pooled, config, data.n_times, m_hat, names, settings)
    sections = {
        "run": _run_echo(settings),
        "data": {
            **{k: paths[k] for k in _PATH_KEYS if paths[k]},
            "n": str(data.y.size),
            "n_times": str(data.n_times),
            "n_modifiers": str(data.n_modifiers),
            "n_design_cols": str(data.Z.shape[1]),
            "family": data.family,
            "modifier_names": ",".join(names),
        },
        "result": {
            "draws_per_chain": str(config.draws_per_chain),
            "chain_seeds": ",".join(str(config.seed + c) for c in range(config.chains)),
            **_counter_entries(chains, settings["selection"]),
        },
    }
    if roles:
        sections["roles"] = dict(roles)
    dataio.write_manifest(outdir / "manifest.ini", sections)
    return 0


def cmd_summarize(args) -> int:
    draws_dir = Path(args.draws)
    manifest = dataio.read_manifest(draws_dir / "manifest.ini")
    if "run" not in manifest or "data" not in manifest:
        raise ValidationError(f"{draws_dir}/manifest.ini is missing its [run] or [data] section")
    settings = {k: default for k, (_, default) in _SETTINGS.items()}
    for key, raw in manifest["run"].items():
        if key in _SETTINGS:
            settings[key] = _parse_setting(key, raw)
    for key in ("alpha", "grid_points", "percentiles", "plots"):
        v = getattr(args, key, None)
        if v is not None:
            settings[key] = _parse_setting(key, v) if isinstance(v, str) else v
    n_times = int(manifest["data"]["n_times"])
    names = manifest["data"]["modifier_names"].split(",")
    chains = [dataio.read_draws_csv(p, cid) for cid, p in dataio.draw_files(draws_dir)]
    pooled = PosteriorDraws.pool(chains)
    index_path = draws_dir / "index.csv"
    if index_path.exists():
        _, m_hat = dataio.read_matrix_csv(index_path)
        m_hat = m_hat[:, 0]
    else:
        raise ValidationError(f"{draws_dir} has no index.csv; summarize needs the fitted index")
    outdir = _resolve_outdir(args)
    outdir.mkdir(parents=True, exist_ok=True)
    write_summary_files(outdir, pooled, _sampler_config(settings), n_times, m_hat, names, settings)
    return 0


def cmd_simulate(settings: dict, paths: dict, outdir: Path) -> int:
    pool = None
    if paths["exposure_pool"]:
        _, pool = dataio.read_matrix_csv(paths["exposure_pool"])
    spec = ScenarioSpec(
        scenario=settings["scenario"],
        n=settings["n"],
        L=settings["modifiers_count"],
        T=settings["n_times"],
        snr=settings["snr"],
        replicates=settings["replicates"],
        seed=settings["seed"],
        exposure_source="csv_pool" if pool is not None else "synthetic_ar1",
        exposure_pool=pool,
        pool_replace=settings["pool_replace"],
    )
    config = _sampler_config(settings)
    arms = tuple(s.strip() for s in settings["arms"].split(",") if s.strip())
    if not arms:
        raise ValidationError("--arms must name at least one model arm")
    result = run_study(spec, config, arms=arms, alpha=settings["alpha"], jobs=settings["jobs"])

    outdir.mkdir(parents=True, exist_ok=True)
    f = dataio.fmt_float
    rep_rows, weight_rows = [], []
    for arm in arms:
        for r, score in enumerate(result.scores[arm]):
            rep_rows.append([
                settings["scenario"], f(spec.snr), arm, str(r),
                f(score.index_rmse), f(score.index_abs_bias),
                f(score.cumulative.rmse), f(score.cumulative.coverage), f(score.cumulative.width),
                f(score.pointwise.rmse), f(score.pointwise.coverage), f(score.pointwise.width),
            ])
        for r, ws in enumerate(result.weights[arm]):
            for l, name in enumerate(ws.names):
                weight_rows.append([
                    arm, str(r), name, f(ws.rho_mean[l]), f(ws.rho_sd[l]), f(ws.pip[l])
                ])
    dataio.write_table_csv(
        outdir / "replicates.csv",
        ["scenario", "snr", "model", "replicate", "index_rmse", "index_abs_bias",
         "ce_rmse", "ce_coverage", "ce_width", "pw_rmse", "pw_coverage", "pw_width"],
        rep_rows,
    )
    summary_rows = []
    for arm in arms:
        agg = result.aggregated[arm]
        summary_rows.append([
            settings["scenario"], f(spec.snr), arm,
            f(agg.index_rmse),
            f(agg.cumulative.rmse), f(agg.cumulative.coverage), f(agg.cumulative.width),
            f(agg.pointwise.rmse), f(agg.pointwise.coverage), f(agg.pointwise.width),
        ])
    dataio.write_table_csv(
        outdir / "summary.csv",
        ["scenario", "snr", "model", "index_rmse",
         "ce_rmse", "ce_coverage", "ce_width", "pw_rmse", "pw_coverage", "pw_width"],
        summary_rows,
    )
    dataio.write_table_csv(
        outdir / "weights.csv",
        ["model", "replicate", "modifier", "rho_mean", "rho_sd", "pip"],
        weight_rows,
    )
    if settings["emit_data"]:
        for r in range(spec.replicates):
            cohort = simulate_cohort(spec, r)
            dataio.write_cohort_bundle(outdir / "data" / f"replicate_{r}", cohort)
    dataio.write_manifest(
        outdir / "manifest.ini",
        {"run": _run_echo(settings), "result": {"arms": ",".join(arms)}},
    )
    return 0


def _add_sampler_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("sampler")
    g.add_argument("--iterations", type=int, help="total MCMC iterations per chain")
    g.add_argument("--burn-in", type=int, help="iterations discarded before storage")
    g.add_argument("--thin", type=int, help="keep every k-th post-burn-in draw")
    g.add_argument("--chains", type=int, help="independent chains (seeded seed, seed+1, ...)")
    g.add_argument("--seed", type=int, help="base random seed")
    g.add_argument("--df-mod", type=int, help="spline df for the modifier direction")
    g.add_argument("--df-time", type=int, help="spline df for the lag direction")
    g.add_argument("--family", choices=("gaussian", "binomial"), help="outcome family")
    g.add_argument("--selection", action=argparse.BooleanOptionalAction, default=None,
                   help="spike-and-slab selection on the index weights")
    g.add_argument("--q", type=float, help="Gamma shape for the weight prior")
    g.add_argument("--tau2", type=float, help="prior variance for surface coefficients")
    g.add_argument("--xi2", type=float, help="prior variance for non-intercept covariates")
    g.add_argument("--ig-shape", type=float, help="inverse-gamma shape for the noise variance")
    g.add_argument("--ig-scale", type=float, help="inverse-gamma scale for the noise variance")
    g.add_argument("--inclusion-prob", type=float, help="prior inclusion probability")
    g.add_argument("--adapt-target", type=float, help="proposal acceptance target")
    g.add_argument("--adapt-window", type=int, help="adaptation window (iterations)")
    g.add_argument("--random-scan", action=argparse.BooleanOptionalAction, default=None,
                   help="update weights in random order each sweep")


def _add_summary_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("summaries")
    g.add_argument("--alpha", type=float, help="1 - credible level, default 0.05")
    g.add_argument("--grid-points", type=int, help="index grid size for effect curves")
    g.add_argument("--percentiles", type=str,
                   help="index percentiles for window reports, e.g. 25,50,75")
    g.add_argument("--plots", action=argparse.BooleanOptionalAction, default=None,
                   help="also write SVG figures")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lagindex",
        description="Distributed lag models with an estimated modifier index.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    fit = sub.add_parser("fit", help="fit the model to cohort CSVs")
    fit.add_argument("--config", type=Path, help="INI file with [run]/[data]/[roles] sections")
    fit.add_argument("--output", type=Path, help="output directory (or set LAGINDEX_OUT)")
    d = fit.add_argument_group("data")
    d.add_argument("--data", type=Path, help="single CSV holding all columns; needs --role")
    d.add_argument("--role", action="append", metavar="NAME=COLUMNS",
                   help="column roles for --data: response/exposure/modifier/covariate; "
                        "COLUMNS is a comma list or a range like x1..x37")
    d.add_argument("--response", type=Path, help="one-column response CSV")
    d.add_argument("--exposure", type=Path, help="n x T exposure CSV, lag columns in order")
    d.add_argument("--modifiers", type=Path, help="n x L modifier CSV, values in [0, 1]")
    d.add_argument("--covariates", type=Path, help="optional n x c covariate CSV")
    d.add_argument("--scale-modifiers", action=argparse.BooleanOptionalAction, default=None,
                   help="min-max rescale each modifier column to [0, 1]")
    _add_sampler_flags(fit)
    _add_summary_flags(fit)

    sim = sub.add_parser("simulate", help="replicate study for one scenario cell")
    sim.add_argument("--config", type=Path, help="INI file with a [run] section")
    sim.add_argument("--output", type=Path, help="output directory (or set LAGINDEX_OUT)")
    s = sim.add_argument_group("scenario")
    s.add_argument("--scenario", choices=("equal", "different", "sparse"),
                   help="true index weight pattern")
    s.add_argument("--snr", type=float, help="signal-to-noise ratio of the lag term")
    s.add_argument("--n", type=int, help="cohort size per replicate")
    s.add_argument("--replicates", type=int, help="number of simulated replicates")
    s.add_argument("--modifiers-count", type=int, help="number of candidate modifiers L")
    s.add_argument("--t", dest="n_times", type=int, help="number of exposure weeks T")
    s.add_argument("--exposure-pool", type=Path,
                   help="CSV of exposure histories to resample instead of AR(1) draws")
    s.add_argument("--pool-replace", action=argparse.BooleanOptionalAction, default=None,
                   help="sample the exposure pool with replacement")
    s.add_argument("--arms", type=str, help="comma list from: estimated, fixed_equal")
    s.add_argument("--emit-data", action=argparse.BooleanOptionalAction, default=None,
                   help="also write each replicate's data as CSV bundles")
    s.add_argument("--jobs", type=int, help="parallel replicate workers")
    _add_sampler_flags(sim)
    sim.add_argument("--alpha", type=float, help="1 - credible level for interval scores")

    summ = sub.add_parser("summarize", help="recompute summaries from saved draws")
    summ.add_argument("--draws", type=Path, required=True,
                      help="directory written by fit (draws + manifest.ini + index.csv)")
    summ.add_argument("--output", type=Path, help="output directory (or set LAGINDEX_OUT)")
    _add_summary_flags(summ)
    return parser


def _dispatch(args) -> int:
    if args.command == "summarize":
        return cmd_summarize(args)
    settings, paths, roles = resolve_settings(args)
    outdir = _resolve_outdir(args)
    if args.command == "fit":
        return cmd_fit(settings, paths, roles, outdir)
    return cmd_simulate(settings, paths, outdir)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _dispatch(args)
    except ValidationError as err:
        print(f"lagindex: error: {err}", file=sys.stderr)
        return 2
    except NumericalError as err:
        print(f"lagindex: numerical failure: {err}", file=sys.stderr)
        return 3
    except OSError as err:
        print(f"lagindex: i/o error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
