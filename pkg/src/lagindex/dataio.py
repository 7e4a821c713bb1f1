"""CSV and manifest input/output for the command line.

All numeric payload is serialized with 17 significant digits, which
round-trips float64 exactly, and files always use LF line endings so a
rerun with the same configuration reproduces every byte.
"""

from __future__ import annotations

import configparser
import csv
import re
from pathlib import Path

import numpy as np

from .sampler import PosteriorDraws
from .validation import ValidationError

__all__ = [
    "fmt_float",
    "read_matrix_csv",
    "write_matrix_csv",
    "write_table_csv",
    "expand_columns",
    "select_columns",
    "write_manifest",
    "read_manifest",
    "write_draws_csv",
    "read_draws_csv",
    "draw_files",
    "write_cohort_bundle",
]


def fmt_float(x) -> str:
    return f"{float(x):.17g}"


def _cell_to_float(text: str, path, line_no: int, col_no: int, col_name: str) -> float:
    s = text.strip()
    where = f"{path} line {line_no} column {col_no} ({col_name})"
    if s == "":
        raise ValidationError(f"{where}: missing value")
    try:
        v = float(s)
    except ValueError:
        raise ValidationError(f"{where}: {s!r} is not a number") from None
    if not np.isfinite(v):
        raise ValidationError(f"{where}: non-finite value {s!r}")
    return v


def read_matrix_csv(path) -> tuple[list[str], np.ndarray]:
    """Strict numeric CSV with a header row; errors cite line and column."""
    path = Path(path)
    if not path.exists():
        raise ValidationError(f"input file not found: {path}")
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValidationError(f"{path}: empty file") from None
        header = [h.strip() for h in header]
        if any(h == "" for h in header):
            raise ValidationError(f"{path} line 1: blank column name in header")
        rows = []
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(header):
                raise ValidationError(
                    f"{path} line {line_no}: {len(row)} fields, header has {len(header)}"
                )
            rows.append([
                _cell_to_float(cell, path, line_no, j + 1, header[j])
                for j, cell in enumerate(row)
            ])
    if not rows:
        raise ValidationError(f"{path}: no data rows")
    return header, np.asarray(rows, dtype=float)


def write_matrix_csv(path, header, array) -> None:
    arr = np.asarray(array, dtype=float)
    if arr.size == 0:
        arr = arr.reshape(0, len(header))
    arr = np.atleast_2d(arr)
    if arr.shape[1] != len(header):
        raise ValidationError(f"{len(header)} header names for {arr.shape[1]} columns")
    lines = [",".join(header)]
    lines.extend(",".join(fmt_float(v) for v in row) for row in arr)
    Path(path).write_text("\n".join(lines) + "\n")


def write_table_csv(path, header, rows) -> None:
    """CSV writer for pre-formatted string cells (mixed-type tables)."""
    lines = [",".join(header)]
    for row in rows:
        cells = list(row)
        if len(cells) != len(header):
            raise ValidationError(f"{len(header)} header names for a {len(cells)}-cell row")
        lines.append(",".join(cells))
    Path(path).write_text("\n".join(lines) + "\n")


_NUM_SUFFIX = re.compile(r"^(.*?)(\d+)$")


def expand_columns(expr: str) -> list[str]:
    """Expand "a,b,c" and "prefix1..prefix12" column expressions."""
    out: list[str] = []
    for part in expr.split(","):
        part = part.strip()
        if not part:
            continue
        if ".." in part:
            left, right = part.split("..", 1)
            ml = _NUM_SUFFIX.match(left.strip())
            mr = _NUM_SUFFIX.match(right.strip())
            if not ml or not mr or ml.group(1) != mr.group(1):
                raise ValidationError(
                    f"bad column range {part!r}: use a shared prefix with numeric ends"
                )
            lo, hi = int(ml.group(2)), int(mr.group(2))
            if hi < lo:
                raise ValidationError(f"bad column range {part!r}: end before start")
            out.extend(f"{ml.group(1)}{i}" for i in range(lo, hi + 1))
        else:
            out.append(part)
    if not out:
        raise ValidationError(f"empty column expression {expr!r}")
    return out


def select_columns(header: list[str], table: np.ndarray, names: list[str], path) -> np.ndarray:
    index = {name: j for j, name in enumerate(header)}
    cols = []
    for name in names:
        if name not in index:
            raise ValidationError(f"{path}: no column named {name!r} (header: {', '.join(header)})")
        cols.append(index[name])
    return table[:, cols]


def write_manifest(path, sections: dict[str, dict]) -> None:
    parser = configparser.ConfigParser()
    parser.optionxform = str
    for section, values in sections.items():
        parser[section] = {k: str(v) for k, v in values.items()}
    with open(path, "w") as fh:
        parser.write(fh)


def read_manifest(path) -> dict[str, dict[str, str]]:
    path = Path(path)
    if not path.exists():
        raise ValidationError(f"manifest not found: {path}")
    parser = configparser.ConfigParser()
    parser.optionxform = str
    parser.read(path)
    return {section: dict(parser[section]) for section in parser.sections()}


def _indexed(prefix: str, k: int) -> list[str]:
    return [f"{prefix}_{i + 1}" for i in range(k)]


def write_draws_csv(path, draws: PosteriorDraws) -> None:
    jk = draws.theta.shape[1]
    p = draws.gamma.shape[1]
    L = draws.a.shape[1]
    header = ["iter"] + _indexed("theta", jk) + _indexed("gamma", p)
    blocks = [draws.iteration[:, None].astype(float), draws.theta, draws.gamma]
    if draws.sigma2 is not None:
        header.append("sigma2")
        blocks.append(draws.sigma2[:, None])
    header += _indexed("a", L) + _indexed("eta", L)
    blocks += [draws.a, draws.eta]
    write_matrix_csv(path, header, np.hstack(blocks))


def _block_width(header: list[str], prefix: str, path) -> int:
    pat = re.compile(rf"^{prefix}_(\d+)$")
    ids = sorted(int(m.group(1)) for h in header if (m := pat.match(h)))
    if not ids or ids != list(range(1, len(ids) + 1)):
        raise ValidationError(f"{path}: malformed draw header for block {prefix!r}")
    return len(ids)


def read_draws_csv(path, chain_id: int = 0) -> PosteriorDraws:
    header, table = read_matrix_csv(path)
    if header[0] != "iter":
        raise ValidationError(f"{path}: first draw column must be 'iter', got {header[0]!r}")
    jk = _block_width(header, "theta", path)
    p = _block_width(header, "gamma", path)
    L = _block_width(header, "a", path)
    if _block_width(header, "eta", path) != L:
        raise ValidationError(f"{path}: a and eta blocks disagree on the modifier count")
    has_sigma = "sigma2" in header
    expected = 1 + jk + p + int(has_sigma) + 2 * L
    if len(header) != expected:
        raise ValidationError(f"{path}: {len(header)} columns, expected {expected}")
    at = 1
    theta = table[:, at:at + jk]; at += jk
    gamma = table[:, at:at + p]; at += p
    sigma2 = None
    if has_sigma:
        sigma2 = table[:, at]; at += 1
    a = table[:, at:at + L]; at += L
    eta = table[:, at:at + L]
    zeros = np.zeros(L, dtype=np.int64)
    return PosteriorDraws(
        theta=theta, gamma=gamma, sigma2=sigma2, a=a, eta=eta,
        iteration=table[:, 0].astype(np.int64), chain_id=chain_id,
        accept_count=zeros.copy(), attempt_count=zeros.copy(),
        swap_accept_count=zeros.copy(), swap_attempt_count=zeros.copy(),
    )


_DRAW_FILE = re.compile(r"^draws_chain(\d+)\.csv$")


def draw_files(directory) -> list[tuple[int, Path]]:
    directory = Path(directory)
    found = []
    for item in sorted(directory.iterdir()) if directory.is_dir() else []:
        m = _DRAW_FILE.match(item.name)
        if m:
            found.append((int(m.group(1)), item))
    if not found:
        raise ValidationError(f"no draws_chain*.csv files under {directory}")
    return sorted(found)


def _plain(prefix: str, k: int) -> list[str]:
    # data-file headers skip the underscore so x1..xT role ranges match them
    return [f"{prefix}{i + 1}" for i in range(k)]


def write_cohort_bundle(outdir, cohort) -> None:
    """One replicate as CSVs: inputs plus the simulation truths."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    data = cohort.data
    T, L = data.n_times, data.n_modifiers
    write_matrix_csv(outdir / "response.csv", ["y"], data.y[:, None])
    write_matrix_csv(outdir / "exposure.csv", _plain("x", T), data.X)
    write_matrix_csv(outdir / "modifiers.csv", _plain("m", L), data.M)
    n_cov = data.Z.shape[1] - 1 - L
    if n_cov:
        write_matrix_csv(outdir / "covariates.csv", _plain("z", n_cov), data.Z[:, 1 + L:])
    write_matrix_csv(outdir / "true_index.csv", ["m_star"], cohort.m_star_true[:, None])
    write_matrix_csv(outdir / "true_weights.csv", _plain("rho", L), cohort.rho_true[None, :])
    write_matrix_csv(outdir / "true_pointwise.csv", _plain("t", T), cohort.beta_true)
    write_matrix_csv(
        outdir / "true_scale.csv", ["sigma", "snr"],
        np.array([[cohort.sigma_true, cohort.spec.snr]]),
    )
