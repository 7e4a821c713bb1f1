"""Input checking shared across the package.

Validation problems raise :class:`ValidationError` (CLI exit code 2),
numerical failures raise :class:`NumericalError` (CLI exit code 3).
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "ValidationError",
    "NumericalError",
    "as_float_array",
    "check_matrix",
    "check_vector",
    "check_unit_interval",
    "check_positive",
    "check_probability",
]


class ValidationError(ValueError):
    """Malformed input data or configuration."""


class NumericalError(RuntimeError):
    """Numerical failure while fitting (singular systems, divergence)."""


def as_float_array(x, name: str, ndim: int | None = None) -> np.ndarray:
    try:
        arr = np.asarray(x, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"{name} is not numeric: {exc}") from None
    if ndim is not None and arr.ndim != ndim:
        raise ValidationError(f"{name} must have {ndim} dimension(s), got {arr.ndim}")
    if arr.size and not np.all(np.isfinite(arr)):
        bad = np.argwhere(~np.isfinite(arr))[0]
        raise ValidationError(f"{name} contains a non-finite value at index {tuple(bad)}")
    return arr


def check_matrix(x, name: str, rows: int | None = None, cols: int | None = None) -> np.ndarray:
    arr = as_float_array(x, name, ndim=2)
    if rows is not None and arr.shape[0] != rows:
        raise ValidationError(f"{name} must have {rows} rows, got {arr.shape[0]}")
    if cols is not None and arr.shape[1] != cols:
        raise ValidationError(f"{name} must have {cols} columns, got {arr.shape[1]}")
    return arr


def check_vector(x, name: str, size: int | None = None) -> np.ndarray:
    arr = as_float_array(x, name)
    if arr.ndim == 2 and 1 in arr.shape:
        arr = arr.ravel()
    if arr.ndim != 1:
        raise ValidationError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if size is not None and arr.size != size:
        raise ValidationError(f"{name} must have length {size}, got {arr.size}")
    return arr


def check_unit_interval(arr: np.ndarray, name: str) -> None:
    if arr.size and (arr.min() < 0.0 or arr.max() > 1.0):
        i = np.argwhere((arr < 0.0) | (arr > 1.0))[0]
        raise ValidationError(
            f"{name} must lie in [0, 1]; offending entry at index {tuple(i)} "
            f"(use --scale-modifiers to min-max scale raw columns)"
        )


def check_positive(value: float, name: str) -> float:
    value = float(value)
    if not np.isfinite(value) or value <= 0.0:
        raise ValidationError(f"{name} must be a positive finite number, got {value!r}")
    return value


def check_probability(value: float, name: str, open_ends: bool = True) -> float:
    value = float(value)
    ok = 0.0 < value < 1.0 if open_ends else 0.0 <= value <= 1.0
    if not ok:
        raise ValidationError(f"{name} must be a probability in (0, 1), got {value!r}")
    return value
