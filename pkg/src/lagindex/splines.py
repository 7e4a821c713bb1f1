"""Natural cubic spline bases that keep the intercept.

Both smooth dimensions of the cross-basis (modifier index and lag time) use
the same construction: a natural cubic spline with ``df`` basis functions,
the first of which is the constant.  ``df = 2`` degenerates to intercept plus
linear, ``df = 1`` to the intercept alone.  The basis is linear beyond either
boundary knot.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .validation import ValidationError, as_float_array

__all__ = ["SplineSpec", "BasisMatrix", "make_spec", "evaluate_basis"]


@dataclass(frozen=True)
class SplineSpec:
    """Knot layout for one smooth dimension.

    df: number of basis columns including the intercept column.
    boundary: (low, high) boundary knots in data units.
    interior_knots: strictly increasing knots strictly inside the boundary;
        exactly ``max(df - 2, 0)`` of them.
    """

    df: int
    boundary: tuple[float, float]
    interior_knots: tuple[float, ...] = ()
    includes_intercept: bool = True

    def __post_init__(self):
        if int(self.df) != self.df or self.df < 1:
            raise ValidationError(f"df must be a positive integer, got {self.df!r}")
        object.__setattr__(self, "df", int(self.df))
        lo, hi = (float(self.boundary[0]), float(self.boundary[1]))
        if not (np.isfinite(lo) and np.isfinite(hi)) or not lo < hi:
            raise ValidationError(f"boundary knots must be finite with low < high, got {self.boundary!r}")
        object.__setattr__(self, "boundary", (lo, hi))
        knots = tuple(float(k) for k in self.interior_knots)
        object.__setattr__(self, "interior_knots", knots)
        expected = max(self.df - 2, 0)
        if len(knots) != expected:
            raise ValidationError(
                f"df={self.df} needs {expected} interior knot(s), got {len(knots)}"
            )
        if any(not np.isfinite(k) for k in knots):
            raise ValidationError("interior knots must be finite")
        if any(k2 <= k1 for k1, k2 in zip(knots, knots[1:])):
            raise ValidationError(f"interior knots must be strictly increasing, got {knots}")
        if knots and (knots[0] <= lo or knots[-1] >= hi):
            raise ValidationError(
                f"interior knots {knots} must lie strictly inside the boundary {self.boundary}"
            )
        if not self.includes_intercept:
            raise ValidationError("only intercept-including bases are supported")


@dataclass(frozen=True)
class BasisMatrix:
    """Evaluated basis: ``values`` has one row per point, ``df`` columns."""

    values: np.ndarray
    spec: SplineSpec


def make_spec(
    df: int,
    boundary: tuple[float, float],
    placement: str = "equally_spaced",
    values=None,
) -> SplineSpec:
    """Build a SplineSpec with interior knots placed by the given rule.

    placement="equally_spaced" spaces df-2 knots evenly inside the boundary;
    placement="quantiles" puts them at quantiles of ``values`` (linear
    interpolation), which is how the lag dimension places knots over the
    observed time grid.
    """
    if int(df) != df or df < 1:
        raise ValidationError(f"df must be a positive integer, got {df!r}")
    df = int(df)
    lo, hi = float(boundary[0]), float(boundary[1])
    m = max(df - 2, 0)
    if m == 0:
        return SplineSpec(df=df, boundary=(lo, hi), interior_knots=())
    probs = np.arange(1, m + 1) / (m + 1)
    if placement == "equally_spaced":
        knots = lo + (hi - lo) * probs
    elif placement == "quantiles":
        if values is None:
            raise ValidationError("placement='quantiles' requires values")
        vals = as_float_array(values, "knot placement values")
        if vals.size < 2:
            raise ValidationError("knot placement values need at least two points")
        knots = np.quantile(vals, probs)
    else:
        raise ValidationError(f"unknown knot placement {placement!r}")
    if np.unique(knots).size != knots.size:
        raise ValidationError(
            f"tied knots {tuple(knots)}: reduce df or supply more distinct values"
        )
    return SplineSpec(df=df, boundary=(lo, hi), interior_knots=tuple(knots))


class BasisEvaluator:
    """Reusable evaluator; caches the scaled knot layout for one spec.

    The argument is mapped affinely onto [0, 1] by the boundary knots before
    the truncated-power terms are formed, keeping values O(1) regardless of
    the data units.  Beyond either boundary every column is exactly linear.
    """

    def __init__(self, spec: SplineSpec):
        self.spec = spec
        lo, hi = spec.boundary
        self._offset = lo
        self._scale = hi - lo
        # scaled knots include the boundary; length df for df >= 2
        inner = (np.asarray(spec.interior_knots, dtype=float) - lo) / self._scale
        self._knots = np.concatenate(([0.0], inner, [1.0]))

    def __call__(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        u = (x - self._offset) / self._scale
        df = self.spec.df
        out = np.empty((u.size, df))
        out[:, 0] = 1.0
        if df >= 2:
            out[:, 1] = u
        if df >= 3:
            t = self._knots
            p = np.clip(u[:, None] - t[None, :], 0.0, None) ** 3
            # d_k = ((u-t_k)+^3 - (u-t_last)+^3) / (t_last - t_k)
            d = (p[:, :-1] - p[:, -1:]) / (t[-1] - t[:-1])[None, :]
            out[:, 2:] = d[:, :-1] - d[:, -1:]
        return out


def evaluate_basis(spec: SplineSpec, points) -> BasisMatrix:
    """Evaluate the basis at the given points (finite, any order)."""
    pts = as_float_array(points, "evaluation points")
    if pts.ndim != 1:
        pts = pts.ravel()
    values = BasisEvaluator(spec)(pts)
    return BasisMatrix(values=values, spec=spec)
