"""Input checks shared by the functional API and the estimators.

scikit-learn's ``check_array`` refuses complex input, so signals are
validated here instead.
"""
from __future__ import annotations

import numbers

import numpy as np


def check_signal(y, *, name="y", min_length=1):
    """Return ``y`` as a finite 1-D complex array."""
    arr = np.asarray(y)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be 1-D, got shape {arr.shape}")
    if arr.size < min_length:
        raise ValueError(f"{name} needs at least {min_length} samples, got {arr.size}")
    if not (np.issubdtype(arr.dtype, np.number) or arr.dtype == bool):
        raise TypeError(f"{name} must be numeric, got dtype {arr.dtype}")
    arr = arr.astype(complex)
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains NaN or infinite values")
    return arr


def check_signals(X, *, name="X"):
    """Return ``X`` as a 2-D complex array of signals, one per row."""
    arr = np.asarray(X)
    if arr.ndim == 1:
        arr = arr[np.newaxis, :]
    if arr.ndim != 2:
        raise ValueError(f"{name} must be 1-D or 2-D, got shape {arr.shape}")
    return np.vstack([check_signal(row, name=name) for row in arr])


def check_matrix(A, *, name="A"):
    arr = np.asarray(A)
    if arr.ndim != 2 or 0 in arr.shape:
        raise ValueError(f"{name} must be a nonempty 2-D matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains NaN or infinite values")
    return arr


def check_probability(beta, *, name="beta"):
    if not isinstance(beta, numbers.Real) or not 0.0 < beta < 1.0:
        raise ValueError(f"{name} must lie in the open interval (0, 1), got {beta!r}")
    return float(beta)


def check_positive_int(value, *, name, minimum=1):
    if isinstance(value, bool) or not isinstance(value, numbers.Integral) or value < minimum:
        raise ValueError(f"{name} must be an integer >= {minimum}, got {value!r}")
    return int(value)


def check_noise_level(eta, *, name="eta", allow_zero=False):
    if not isinstance(eta, numbers.Real) or not np.isfinite(eta):
        raise ValueError(f"{name} must be a finite real number, got {eta!r}")
    if eta < 0 or (eta == 0 and not allow_zero):
        bound = ">= 0" if allow_zero else "> 0"
        raise ValueError(f"{name} must be {bound}, got {eta!r}")
    return float(eta)
