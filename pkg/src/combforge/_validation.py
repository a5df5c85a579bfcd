"""Input coercion shared by the estimators and the CLI."""
from __future__ import annotations

import numpy as np

from ._errors import InputError
from .realset import IntervalUnion, normalize


def check_interval_union(X) -> IntervalUnion:
    """Accept an IntervalUnion, a ``{"bands": ...}`` mapping or a ``(k, 2)`` array."""
    if isinstance(X, IntervalUnion):
        return X
    if isinstance(X, dict):
        return IntervalUnion.from_json(X)
    arr = as_float_array(X)
    if arr.ndim == 1 and arr.size == 2:
        arr = arr[None, :]
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise InputError(f"expected bands of shape (k, 2), got {arr.shape}")
    return normalize(arr.tolist())


def as_float_array(X, dtype=float) -> np.ndarray:
    try:
        return np.asarray(X, dtype=dtype)
    except (TypeError, ValueError):
        raise InputError("expected numeric array input") from None


def check_points(z, allow_complex: bool = True) -> np.ndarray:
    arr = as_float_array(z, complex if allow_complex else float)
    arr = np.atleast_1d(arr).ravel()
    if not np.all(np.isfinite(arr)):
        raise InputError("points must be finite")
    return arr


def check_degree(n, name: str = "degree", minimum: int = 1) -> int:
    if isinstance(n, bool) or int(n) != n or n < minimum:
        raise InputError(f"{name} must be an integer >= {minimum}")
    return int(n)


def check_values(values) -> np.ndarray:
    arr = as_float_array(values).ravel()
    if arr.size == 0 or not np.all(np.isfinite(arr)):
        raise InputError("values must be a non-empty list of finite reals")
    return arr
