"""Input validation helpers used by the functional API and the estimators."""
from __future__ import annotations

import numbers

import numpy as np

__all__ = [
    "check_mass",
    "check_positive",
    "check_power_of_two",
    "check_branch",
    "check_spinor_array",
    "check_time_grid",
]


def check_mass(m, name: str = "mass") -> float:
    if not isinstance(m, numbers.Real) or not np.isfinite(m) or m < 0:
        raise ValueError(f"{name} must be a finite real >= 0, got {m!r}")
    return float(m)


def check_positive(v, name: str) -> float:
    if not isinstance(v, numbers.Real) or not np.isfinite(v) or v <= 0:
        raise ValueError(f"{name} must be a finite real > 0, got {v!r}")
    return float(v)


def check_power_of_two(n, name: str = "N") -> int:
    if not isinstance(n, numbers.Integral) or n < 2 or (n & (n - 1)) != 0:
        raise ValueError(f"{name} must be a power of two >= 2, got {n!r}")
    return int(n)


def check_branch(branch) -> int:
    """Map ``'+'``/``'-'``/``+1``/``-1`` to ``+1`` or ``-1``."""
    if branch in ("+", "plus", "positive", 1, +1):
        return 1
    if branch in ("-", "minus", "negative", -1):
        return -1
    raise ValueError(f"branch must be '+' or '-', got {branch!r}")


def check_spinor_array(X) -> np.ndarray:
    """Return ``X`` as a complex ``(N, 2)`` array of finite samples."""
    arr = np.asarray(X, dtype=complex)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError(f"expected spinor samples of shape (N, 2), got {arr.shape}")
    if arr.shape[0] < 2:
        raise ValueError("need at least two spatial samples")
    if not np.all(np.isfinite(arr)):
        raise ValueError("spinor samples contain NaN or inf")
    return arr


def check_time_grid(t, name: str = "t_grid") -> np.ndarray:
    arr = np.atleast_1d(np.asarray(t, dtype=float))
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError(f"{name} must be a non-empty 1-d array")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains NaN or inf")
    if arr.size > 1 and not np.all(np.diff(arr) > 0):
        raise ValueError(f"{name} must be strictly increasing")
    return arr
