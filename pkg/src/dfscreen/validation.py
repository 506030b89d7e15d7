"""Input validation helpers used by the estimators and the functional API."""

from __future__ import annotations

import numpy as np

from .exceptions import DataError


def as_matrix(X, name: str = "X") -> np.ndarray:
    """Coerce to a 2-D float array, rejecting non-finite entries."""
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise DataError(f"{name} must be 2-dimensional, got ndim={X.ndim}")
    if X.shape[0] < 1 or X.shape[1] < 1:
        raise DataError(f"{name} must be non-empty, got shape {X.shape}")
    if not np.isfinite(X).all():
        raise DataError(f"{name} contains non-finite entries")
    return X


def as_vector(y, name: str = "y") -> np.ndarray:
    """Coerce to a 1-D float array, rejecting non-finite entries."""
    y = np.asarray(y, dtype=float)
    if y.ndim != 1:
        raise DataError(f"{name} must be 1-dimensional, got ndim={y.ndim}")
    if y.shape[0] < 1:
        raise DataError(f"{name} must be non-empty")
    if not np.isfinite(y).all():
        raise DataError(f"{name} contains non-finite entries")
    return y


def check_same_rows(X: np.ndarray, y: np.ndarray) -> None:
    if X.shape[0] != y.shape[0]:
        raise DataError(
            f"X has {X.shape[0]} rows but y has {y.shape[0]} entries"
        )


def standardize_columns(X) -> np.ndarray:
    """Center each column to zero mean and scale to unit sample variance.

    Constant columns cannot be standardized and are rejected.
    """
    X = as_matrix(X)
    if X.shape[0] < 2:
        raise DataError("standardization needs at least 2 rows")
    mu = X.mean(axis=0)
    sd = X.std(axis=0, ddof=1)
    bad = np.flatnonzero(sd == 0.0)
    if bad.size:
        raise DataError(f"column {bad[0]} is constant and cannot be standardized")
    return (X - mu) / sd


def check_standardized(X: np.ndarray, tol: float = 1e-6) -> None:
    """Verify every column has zero mean and unit sample variance within tol."""
    mu = X.mean(axis=0)
    var = X.var(axis=0, ddof=1)
    off = np.maximum(np.abs(mu), np.abs(var - 1.0))
    bad = np.flatnonzero(off > tol)
    if bad.size:
        j = int(bad[0])
        raise DataError(
            f"column {j} is not standardized "
            f"(mean={mu[j]:.3e}, sample variance={var[j]:.6f}); "
            "center and scale columns first"
        )
