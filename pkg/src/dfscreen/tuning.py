"""Ridge schedule and cross-validation for the stopping constant.

The CV exploits that, per fold, every value of the stopping constant c
truncates the same forward path: thresholds scale linearly in c, so one
path per fold serves the whole grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import ParameterError
from .links import LinkSpec, inverse_link, transform_response
from .screening import build_problem, tdf_select, tdf_threshold
from .validation import as_matrix, as_vector, check_same_rows

DEFAULT_C_GRID = tuple(np.geomspace(1e-3, 10.0, 20))


@dataclass(frozen=True)
class CvReport:
    """Grid, per-fold errors, fold means, and the winning constant."""

    c_grid: tuple[float, ...]
    fold_errors: np.ndarray
    mean_errors: np.ndarray
    chosen_c: float


def default_lambda(n: int, p: int) -> float:
    """Default ridge shift 4 (log(p) / n)^{1/4}."""
    if p < 2:
        raise ParameterError(f"p must be >= 2 for a positive log(p), got {p}")
    if n < 1:
        raise ParameterError(f"n must be >= 1, got {n}")
    return 4.0 * (math.log(p) / n) ** 0.25


def ols_fit(X_sel: np.ndarray, ystar: np.ndarray) -> np.ndarray:
    """Least squares with intercept; rank deficiency handled by the SVD solver.

    Returns [intercept, coefficients...]; an empty selection gives the
    intercept-only fit.
    """
    A = np.column_stack([np.ones(ystar.shape[0]), X_sel])
    coef, *_ = np.linalg.lstsq(A, ystar, rcond=None)
    return coef


def ols_predict(coef: np.ndarray, X_sel: np.ndarray) -> np.ndarray:
    return coef[0] + X_sel @ coef[1:]


def _fold_partition(n: int, folds: int, seed: int) -> list[np.ndarray]:
    perm = np.random.default_rng(seed).permutation(n)
    return np.array_split(perm, folds)


def _prefix_for_c(path, base_thresholds: np.ndarray, c: float) -> tuple[int, ...]:
    """Selection that thresholded forward selection with constant c produces,
    read off a shared path (thresholds are linear in c)."""
    dec = np.asarray(path.decrements)
    if dec.size == 0:
        return ()
    fired = np.flatnonzero(dec <= c * base_thresholds[: dec.size])
    if fired.size == 0:
        return path.order
    return path.order[: int(fired[0])]


def cv_select_c(
    X,
    y,
    link: LinkSpec,
    lam: float | None = None,
    c_grid=None,
    folds: int = 10,
    seed: int = 0,
    max_steps: int | None = None,
    error_scale: str = "response",
) -> CvReport:
    """Choose the stopping constant by k-fold cross-validation.

    Rows are partitioned by a seeded shuffle into balanced folds. For every
    (c, fold) pair the full pipeline runs on the training part: the response
    is transformed, the design decorrelated (lam recomputed from the
    training row count unless a fixed ``lam`` is given), and thresholded
    forward selection produces a support. An intercept least-squares fit on
    the transformed training response is scored on the held-out rows, by
    default as squared error on the original response scale through the
    inverse link (set ``error_scale="transformed"`` to score on the
    transformed scale instead). The constant with the smallest mean error
    wins; ties go to the smallest constant.
    """
    X = as_matrix(X)
    y = as_vector(y)
    check_same_rows(X, y)
    n, p = X.shape

    if folds < 2:
        raise ParameterError(f"folds must be >= 2, got {folds}")
    if error_scale not in ("response", "transformed"):
        raise ParameterError(f"unknown error_scale {error_scale!r}")
    grid = DEFAULT_C_GRID if c_grid is None else tuple(float(c) for c in c_grid)
    if len(grid) == 0:
        raise ParameterError("c_grid must be non-empty")
    if any(c <= 0 for c in grid):
        raise ParameterError("all grid values must be positive")
    grid = tuple(sorted(grid))

    parts = _fold_partition(n, folds, seed)
    min_train = n - max(part.size for part in parts)
    if min_train < 21:
        raise ParameterError(
            f"smallest training part has {min_train} rows; the stopping "
            "threshold needs at least 21"
        )

    fold_errors = np.empty((len(grid), folds))
    for f, test_idx in enumerate(parts):
        train_mask = np.ones(n, dtype=bool)
        train_mask[test_idx] = False
        X_tr, y_tr = X[train_mask], y[train_mask]
        X_te, y_te = X[test_idx], y[test_idx]
        n_tr = X_tr.shape[0]

        lam_f = default_lambda(n_tr, p) if lam is None else float(lam)
        problem = build_problem(X_tr, y_tr, link, lam_f)
        budget = min(n_tr, p) if max_steps is None else min(max_steps, n_tr, p)

        # One path per fold: run with the smallest constant, whose stop step
        # bounds the stop step of every larger constant.
        result = tdf_select(problem, grid[0], budget)
        base_t = np.array([
            tdf_threshold(1.0, k, problem.psi_op_norm_sq, n_tr, p,
                          problem.identity_transform)
            for k in range(1, len(result.path.order) + 1)
        ])

        ystar_tr = transform_response(y_tr, link).ystar
        if error_scale == "transformed":
            target = transform_response(y_te, link).ystar
        else:
            target = y_te

        err_by_size: dict[int, float] = {}
        for g, c in enumerate(grid):
            sel = _prefix_for_c(result.path, base_t, c)
            size = len(sel)
            if size not in err_by_size:
                cols = list(sel)
                coef = ols_fit(X_tr[:, cols], ystar_tr)
                pred = ols_predict(coef, X_te[:, cols])
                if error_scale == "response":
                    pred = inverse_link(pred, link)
                err_by_size[size] = float(np.mean((target - pred) ** 2))
            fold_errors[g, f] = err_by_size[size]

    mean_errors = fold_errors.mean(axis=1)
    chosen = grid[int(np.argmin(mean_errors))]
    return CvReport(
        c_grid=grid,
        fold_errors=fold_errors,
        mean_errors=mean_errors,
        chosen_c=float(chosen),
    )
