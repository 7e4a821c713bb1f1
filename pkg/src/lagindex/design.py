"""Cohort data container and cross-basis design assembly.

The modifier index is m*_i = m_i' rho with rho on the simplex.  The
cross-basis row for subject i is the outer product of the modifier basis
b(m*_i) with the time-contracted exposures v_i = C' x_i, flattened with the
time index fastest.  The exposure history enters only through V = X C, which
is free of rho and computed once per fit.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .splines import BasisMatrix
from .validation import ValidationError, check_matrix, check_unit_interval, check_vector

__all__ = [
    "CohortData",
    "IndexWeights",
    "CrossBasisDesign",
    "modifier_index",
    "time_contraction",
    "build_cross_basis",
    "assemble_design",
]

FAMILIES = ("gaussian", "binomial")


def _lock(arr: np.ndarray) -> np.ndarray:
    arr = np.ascontiguousarray(arr, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class CohortData:
    """One analysis cohort, immutable after construction.

    y: response vector (length n); {0,1} coded for the binomial family.
    X: n x T exposure history, one column per time point t = 1..T.
    M: n x L candidate modifiers, each column already scaled to [0, 1].
    Z: n x p covariate block with a leading all-ones intercept column and
       the L modifier main-effect columns right after it.
    """

    y: np.ndarray
    X: np.ndarray
    M: np.ndarray
    Z: np.ndarray
    family: str = "gaussian"

    def __post_init__(self):
        y = check_vector(self.y, "y")
        n = y.size
        if n < 1:
            raise ValidationError("empty cohort")
        X = check_matrix(self.X, "X", rows=n)
        if X.shape[1] < 2:
            raise ValidationError(f"X needs at least two time points, got {X.shape[1]}")
        M = check_matrix(self.M, "M", rows=n)
        if M.shape[1] < 1:
            raise ValidationError("M needs at least one modifier column")
        check_unit_interval(M, "M")
        Z = check_matrix(self.Z, "Z", rows=n)
        if Z.shape[1] < 1 + M.shape[1]:
            raise ValidationError(
                f"Z must hold the intercept plus {M.shape[1]} modifier main effects"
            )
        if not np.all(Z[:, 0] == 1.0):
            raise ValidationError("the first column of Z must be the intercept (all ones)")
        if self.family not in FAMILIES:
            raise ValidationError(f"family must be one of {FAMILIES}, got {self.family!r}")
        if self.family == "binomial" and not np.all(np.isin(y, (0.0, 1.0))):
            raise ValidationError("binomial responses must be coded 0/1")
        for name, arr in (("y", y), ("X", X), ("M", M), ("Z", Z)):
            object.__setattr__(self, name, _lock(arr))

    @classmethod
    def assemble(cls, y, X, M, covariates=None, family: str = "gaussian") -> "CohortData":
        """Build Z as [1 | M | covariates] and validate everything."""
        y = check_vector(y, "y")
        M = check_matrix(M, "M", rows=y.size)
        blocks = [np.ones((y.size, 1)), M]
        if covariates is not None:
            blocks.append(check_matrix(covariates, "covariates", rows=y.size))
        return cls(y=y, X=X, M=M, Z=np.hstack(blocks), family=family)

    @property
    def n(self) -> int:
        return self.y.size

    @property
    def n_times(self) -> int:
        return self.X.shape[1]

    @property
    def n_modifiers(self) -> int:
        return self.M.shape[1]

    @property
    def n_covariates(self) -> int:
        return self.Z.shape[1]


@dataclass
class IndexWeights:
    """Unnormalized weights a >= 0, inclusion flags eta, and rho = a/sum(a)."""

    a: np.ndarray
    eta: np.ndarray
    rho: np.ndarray

    @classmethod
    def from_unnormalized(cls, a, eta=None) -> "IndexWeights":
        a = check_vector(a, "a").copy()
        if np.any(a < 0.0):
            raise ValidationError("weights a must be non-negative")
        total = a.sum()
        if total <= 0.0:
            raise ValidationError("all weights are zero; at least one modifier must be active")
        if eta is None:
            eta = (a > 0.0).astype(float)
        else:
            eta = check_vector(eta, "eta", size=a.size).copy()
            if not np.all(np.isin(eta, (0.0, 1.0))):
                raise ValidationError("eta must be 0/1")
            if np.any((eta == 0.0) & (a != 0.0)):
                raise ValidationError("eta=0 requires the matching weight to be zero")
        return cls(a=a, eta=eta, rho=a / total)


def modifier_index(M: np.ndarray, rho: np.ndarray) -> np.ndarray:
    """m* = M rho; rho must be a simplex vector matching M's columns."""
    M = check_matrix(M, "M")
    rho = check_vector(rho, "rho", size=M.shape[1])
    if np.any(rho < 0.0) or abs(rho.sum() - 1.0) > 1e-8:
        raise ValidationError(f"rho must be non-negative and sum to one, got sum {rho.sum()!r}")
    # exact arithmetic keeps M rho in [0,1]; clip float dust only
    return np.clip(M @ rho, 0.0, 1.0)


def _values(basis) -> np.ndarray:
    return basis.values if isinstance(basis, BasisMatrix) else np.asarray(basis, dtype=float)


@dataclass(frozen=True)
class CrossBasisDesign:
    """W (n x nu_mod*nu_time) with its rho-free contraction V (n x nu_time).

    Columns of W are ordered with the time basis index fastest: column
    k * nu_time + j holds b_k(m*_i) * v_ij.
    """

    W: np.ndarray
    V: np.ndarray
    nu_mod: int
    nu_time: int


def time_contraction(X: np.ndarray, time_basis) -> np.ndarray:
    """V = X C where C is the time basis evaluated on t = 1..T."""
    C = _values(time_basis)
    X = check_matrix(X, "X", cols=C.shape[0])
    return X @ C


def build_cross_basis(V: np.ndarray, mod_basis) -> CrossBasisDesign:
    B = _values(mod_basis)
    V = check_matrix(V, "V", rows=B.shape[0])
    n, nu_mod = B.shape
    nu_time = V.shape[1]
    W = (B[:, :, None] * V[:, None, :]).reshape(n, nu_mod * nu_time)
    return CrossBasisDesign(W=W, V=V, nu_mod=nu_mod, nu_time=nu_time)


def assemble_design(W: np.ndarray, Z: np.ndarray) -> np.ndarray:
    """U = [W | Z], the full coefficient design for one sweep."""
    W = check_matrix(W, "W")
    Z = check_matrix(Z, "Z", rows=W.shape[0])
    return np.hstack([W, Z])
