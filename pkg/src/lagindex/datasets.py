"""Bundled demonstration cohort.

A small simulated cohort (n = 100, 12 exposure weeks, 3 candidate
modifiers, 3 extra covariates) shipped as a single CSV so the README
and the test suite can exercise the CLI without generating data first.
"""

from __future__ import annotations

from pathlib import Path

from .dataio import expand_columns, read_matrix_csv, select_columns
from .design import CohortData

__all__ = ["demo_cohort_path", "demo_roles", "load_demo_cohort"]

_DEMO = Path(__file__).parent / "data" / "demo" / "cohort.csv"


def demo_cohort_path() -> Path:
    return _DEMO


def demo_roles() -> dict[str, str]:
    """Column roles matching the bundled cohort.csv layout."""
    return {
        "response": "y",
        "exposure": "x1..x12",
        "modifier": "m1..m3",
        "covariate": "z1..z3",
    }


def load_demo_cohort() -> tuple[CohortData, list[str]]:
    header, table = read_matrix_csv(_DEMO)
    roles = demo_roles()
    y = select_columns(header, table, expand_columns(roles["response"]), _DEMO)[:, 0]
    X = select_columns(header, table, expand_columns(roles["exposure"]), _DEMO)
    mod_names = expand_columns(roles["modifier"])
    M = select_columns(header, table, mod_names, _DEMO)
    Zc = select_columns(header, table, expand_columns(roles["covariate"]), _DEMO)
    data = CohortData.assemble(y=y, X=X, M=M, covariates=Zc, family="gaussian")
    return data, mod_names
