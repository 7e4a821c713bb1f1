"""Optional SVG figures for fitted effect surfaces.

Imported lazily by the CLI so matplotlib is only needed when --plots is
requested. Figures are written with a fixed hash salt and no embedded
date, keeping repeated runs byte-identical.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  backend must be set first

matplotlib.rcParams["svg.hashsalt"] = "lagindex"

__all__ = ["save_effect_plots"]


def _save(fig, path: Path) -> None:
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def save_effect_plots(outdir, summary) -> list[Path]:
    """Cumulative-effect curve and pointwise-effect surface as SVG."""
    outdir = Path(outdir)
    grid = summary.m_grid
    written = []

    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.fill_between(grid, summary.cumulative_lower, summary.cumulative_upper,
                    alpha=0.25, linewidth=0, color="tab:blue")
    ax.plot(grid, summary.cumulative_mean, color="tab:blue")
    ax.axhline(0.0, color="0.6", linewidth=0.8)
    ax.set_xlabel("modifier index m*")
    ax.set_ylabel("cumulative effect")
    path = outdir / "cumulative.svg"
    _save(fig, path)
    written.append(path)

    n_times = summary.pointwise_mean.shape[1]
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    vmax = max(abs(float(summary.pointwise_mean.min())),
               abs(float(summary.pointwise_mean.max())), 1e-12)
    mesh = ax.pcolormesh(
        np.arange(1, n_times + 2) - 0.5,
        _edges(grid),
        summary.pointwise_mean,
        cmap="RdBu_r", vmin=-vmax, vmax=vmax, shading="flat",
    )
    fig.colorbar(mesh, ax=ax, label="pointwise effect")
    ax.set_xlabel("exposure week t")
    ax.set_ylabel("modifier index m*")
    path = outdir / "pointwise.svg"
    _save(fig, path)
    written.append(path)
    return written


def _edges(grid) -> np.ndarray:
    """Cell edges for pcolormesh from (possibly uneven) grid centers."""
    mid = (grid[1:] + grid[:-1]) / 2.0
    first = grid[0] - (mid[0] - grid[0]) if grid.size > 1 else grid[0] - 0.5
    last = grid[-1] + (grid[-1] - mid[-1]) if grid.size > 1 else grid[-1] + 0.5
    return np.concatenate([[first], mid, [last]])
