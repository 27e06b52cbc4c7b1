"""Input validation helpers for array-facing entry points.

scikit-learn's own validators reject complex data, so the estimator and
the functional API share these lightweight checks instead.
"""

from __future__ import annotations

import numpy as np


def check_cpi_array(X, n_fast: int | None = None) -> np.ndarray:
    """Validate a (m_chirps, n_fast) complex frame-like array.

    Accepts anything array-like; 1-D input is promoted to a single chirp.
    Returns a contiguous complex128 array.
    """
    arr = np.asarray(X)
    if arr.ndim == 1:
        arr = arr[np.newaxis, :]
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-D (chirps x fast-time) array, got ndim={arr.ndim}")
    if arr.shape[0] < 1 or arr.shape[1] < 2:
        raise ValueError(f"frame too small: shape {arr.shape}")
    arr = np.ascontiguousarray(arr, dtype=np.complex128)
    if not np.all(np.isfinite(arr.view(np.float64))):
        raise ValueError("frame contains non-finite values")
    if arr.shape[1] & (arr.shape[1] - 1):
        raise ValueError(f"fast-time length {arr.shape[1]} is not a power of two")
    if n_fast is not None and arr.shape[1] != n_fast:
        raise ValueError(f"expected {n_fast} fast-time samples, got {arr.shape[1]}")
    return arr


def check_positive(value: float, name: str) -> float:
    value = float(value)
    if value <= 0:
        raise ValueError(f"{name} must be positive, got {value!r}")
    return value
