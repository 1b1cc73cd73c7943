"""Input validation helpers shared by the estimators and the harness."""

from __future__ import annotations

import numpy as np


def check_channel_matrix(h) -> np.ndarray:
    """Coerce to a finite 2-D complex128 array or raise ValueError."""
    arr = np.asarray(h)
    if arr.ndim != 2:
        raise ValueError(f"channel must be a 2-D matrix, got ndim={arr.ndim}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError(f"channel must be non-empty, got shape {arr.shape}")
    arr = np.asarray(arr, dtype=np.complex128)
    if not np.isfinite(arr).all():
        raise ValueError("channel contains non-finite entries")
    return arr


def check_positive_int(value, name: str) -> int:
    if not (isinstance(value, (int, np.integer)) and not isinstance(value, bool) and value >= 1):
        raise ValueError(f"{name} must be a positive integer, got {value!r}")
    return int(value)
