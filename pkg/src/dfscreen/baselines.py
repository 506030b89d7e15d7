"""Natively implemented comparison methods.

Marginal correlation ranking, ridge high-dimensional OLS projection ranking
(plain and column-weighted), classical forward regression, and extended-BIC
model choice along any nested ordering.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import DegeneracyError, ParameterError
from .linalg import brute_force_drss, build_decorrelator
from .screening import ScreeningPath, df_path, identity_problem
from .validation import as_matrix, as_vector, check_same_rows, check_standardized


@dataclass(frozen=True)
class RankedScreen:
    """Nonnegative per-column scores and the induced descending order."""

    scores: np.ndarray
    order: np.ndarray


def _ranked(scores: np.ndarray) -> RankedScreen:
    # stable sort: ties resolve to the smaller column index
    order = np.argsort(-scores, kind="stable")
    return RankedScreen(scores=scores, order=order)


def sis_rank(X, ystar) -> RankedScreen:
    """Rank columns by |X^T ystar|; requires standardized columns."""
    X = as_matrix(X)
    ystar = as_vector(ystar)
    check_same_rows(X, ystar)
    check_standardized(X)
    return _ranked(np.abs(X.T @ ystar))


def holp_rank(X, ystar, lam: float) -> RankedScreen:
    """Rank columns by |X^T psi^2 ystar| with psi^2 = (X X^T/p + lam I)^{-1}."""
    X = as_matrix(X)
    ystar = as_vector(ystar)
    check_same_rows(X, ystar)
    op = build_decorrelator(X, lam)
    z = op.psi @ (op.psi @ ystar)
    return _ranked(np.abs(X.T @ z))


def wrh_rank(X, ystar, lam: float) -> RankedScreen:
    """Column-weighted ridge projection scores |X_j^T psi^2 y| / sqrt(X_j^T psi^2 X_j).

    The argmax of these scores coincides with the first pick of the
    decorrelated forward path.
    """
    X = as_matrix(X)
    ystar = as_vector(ystar)
    check_same_rows(X, ystar)
    op = build_decorrelator(X, lam)
    Xd = op.psi @ X
    yd = op.psi @ ystar
    den2 = np.einsum("ij,ij->j", Xd, Xd)
    bad = np.flatnonzero(den2 <= 0.0)
    if bad.size:
        raise DegeneracyError(f"column {int(bad[0])} is zero; weight undefined")
    return _ranked(np.abs(Xd.T @ yd) / np.sqrt(den2))


def fr_path(X, ystar, max_steps: int) -> ScreeningPath:
    """Classical greedy forward least squares; the decorrelated loop with psi = I."""
    problem = identity_problem(X, ystar)
    return df_path(problem, max_steps)


def ebic_select(path_or_rank, X, ystar, gamma: float = 1.0, max_size: int | None = None):
    """Pick the best nested prefix of an ordering by extended BIC.

    EBIC(k) = n log(RSS_k / n) + k (log n + 2 gamma log p), with RSS_k the
    projection residual of the first k columns and the RSS floored at
    1e-12 ||ystar||^2 before the log. Ties resolve to the smaller k.

    Returns the winning prefix as a list of column indices.
    """
    X = as_matrix(X)
    ystar = as_vector(ystar)
    check_same_rows(X, ystar)
    n, p = X.shape
    if not 0.0 <= gamma <= 1.0:
        raise ParameterError(f"gamma must lie in [0, 1], got {gamma}")
    limit = min(n - 2, p)
    if max_size is None:
        max_size = limit
    if not 1 <= max_size <= limit:
        raise ParameterError(
            f"max_size must lie in [1, min(n-2, p)] = [1, {limit}], got {max_size}"
        )

    order = np.asarray(path_or_rank.order, dtype=int)
    kmax = min(max_size, order.shape[0])
    total = float(ystar @ ystar)
    if total == 0.0:
        return []
    floor = 1e-12 * total

    penalty = math.log(n) + 2.0 * gamma * math.log(p)
    scores = np.empty(kmax + 1)
    for k in range(kmax + 1):
        rss = brute_force_drss(X[:, order[:k]], ystar)
        scores[k] = n * math.log(max(rss, floor) / n) + k * penalty
    best = int(np.argmin(scores))
    return [int(j) for j in order[:best]]


def default_top_k(n: int) -> int:
    """Conventional screening budget ceil(n / log n)."""
    if n < 2:
        raise ParameterError(f"n must be >= 2, got {n}")
    return math.ceil(n / math.log(n))
