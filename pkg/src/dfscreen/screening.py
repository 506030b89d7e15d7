"""Decorrelated forward selection: the path algorithm and the thresholded
stopping rule.

The forward loop runs on a decorrelated problem (psi-transformed design and
response) and greedily adds the column with the smallest residual sum of
squares. The thresholded variant stops as soon as the rss decrement of the
newest column falls at or below a step-dependent threshold.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import TYPE_CHECKING, Callable

import numpy as np

from .exceptions import ParameterError
from .linalg import (
    DEGENERACY_RTOL,
    apply_decorrelator,
    build_decorrelator,
    forward_extend,
    forward_init,
)
from .links import LinkSpec, transform_response
from .validation import as_matrix, as_vector, check_same_rows, standardize_columns

if TYPE_CHECKING:
    from .tuning import CvReport

# Forward selection stops once the residual has been driven to (numerically)
# zero relative to the initial response energy.
RSS_FLOOR_RTOL = 1e-12


@dataclass(frozen=True)
class TransformedProblem:
    """A decorrelated regression problem ready for forward selection."""

    Xdec: np.ndarray
    Ydec: np.ndarray
    psi_op_norm_sq: float
    lam: float
    identity_transform: bool
    n: int
    p: int

    def __post_init__(self):
        if self.Xdec.shape != (self.n, self.p):
            raise ParameterError(
                f"Xdec has shape {self.Xdec.shape}, expected ({self.n}, {self.p})"
            )
        if self.Ydec.shape != (self.n,):
            raise ParameterError(
                f"Ydec has shape {self.Ydec.shape}, expected ({self.n},)"
            )
        if self.psi_op_norm_sq <= 0:
            raise ParameterError("psi_op_norm_sq must be positive")


@dataclass(frozen=True)
class ScreeningPath:
    """Audit trail of a forward run: selection order, rss profile, decrements."""

    order: tuple[int, ...]
    rss_per_step: tuple[float, ...]
    decrements: tuple[float, ...]


@dataclass(frozen=True)
class SelectionResult:
    """Final selection with the full audit trail.

    ``stop_step`` is the step at which the stopping rule fired (the column
    added at that step is kept in the audit path but dropped from
    ``selected``); 0 means the rule never fired and ``selected`` is the whole
    path.
    """

    selected: tuple[int, ...]
    stop_step: int
    thresholds: tuple[float, ...]
    path: ScreeningPath
    lam: float | None = None
    c: float | None = None
    cv: "CvReport | None" = None


def build_problem(X, y, link: LinkSpec, lam: float) -> TransformedProblem:
    """Transform the response, build the decorrelator, and apply it."""
    X = as_matrix(X)
    y = as_vector(y)
    check_same_rows(X, y)
    tr = transform_response(y, link)
    op = build_decorrelator(X, lam)
    Xdec, Ydec = apply_decorrelator(op, X, tr.ystar)
    return TransformedProblem(
        Xdec=Xdec,
        Ydec=Ydec,
        psi_op_norm_sq=op.psi_op_norm_sq,
        lam=op.lam,
        identity_transform=tr.identity_transform,
        n=X.shape[0],
        p=X.shape[1],
    )


def identity_problem(X, ystar, identity_transform: bool = True) -> TransformedProblem:
    """Wrap an untransformed design as a problem (psi = I); classical forward
    regression runs the same loop on this."""
    X = as_matrix(X)
    ystar = as_vector(ystar)
    check_same_rows(X, ystar)
    return TransformedProblem(
        Xdec=X,
        Ydec=ystar,
        psi_op_norm_sq=1.0,
        lam=0.0,
        identity_transform=identity_transform,
        n=X.shape[0],
        p=X.shape[1],
    )


def _run_forward(
    problem: TransformedProblem,
    max_steps: int,
    stop: Callable[[int, float], bool] | None = None,
) -> tuple[ScreeningPath, int]:
    """Greedy forward loop on the decorrelated problem.

    Keeps a working copy of the design whose columns are progressively
    orthogonalized against the selected basis, so each step costs O(n p).
    ``stop(k, decrement)`` is evaluated after recording step k; returning
    True terminates the loop. Returns the path and the step at which the
    callback fired (0 if it never did).
    """
    X = problem.Xdec
    state = forward_init(problem.Ydec)
    floor = RSS_FLOOR_RTOL * state.rss

    work = X.copy()
    base2 = np.einsum("ij,ij->j", X, X)
    available = np.ones(problem.p, dtype=bool)

    order: list[int] = []
    rss_steps: list[float] = [state.rss]
    decrements: list[float] = []
    fired = 0

    while len(order) < max_steps:
        if state.rss <= floor:
            break
        nrm2 = np.einsum("ij,ij->j", work, work)
        degenerate = nrm2 <= DEGENERACY_RTOL * base2
        usable = available & ~degenerate
        if not usable.any():
            break
        proj = work.T @ state.residual
        reduction = np.zeros(problem.p)
        reduction[usable] = proj[usable] ** 2 / nrm2[usable]
        drss = state.rss - reduction
        cand = np.flatnonzero(usable)
        j = int(cand[np.argmin(drss[cand])])

        prev_rss = state.rss
        state = forward_extend(state, X, j)
        q = state.basis[:, -1]
        work -= np.outer(q, q @ work)
        available[j] = False

        order.append(j)
        rss_steps.append(state.rss)
        dec = max(prev_rss - state.rss, 0.0)
        decrements.append(dec)
        if stop is not None and stop(len(order), dec):
            fired = len(order)
            break

    path = ScreeningPath(
        order=tuple(order),
        rss_per_step=tuple(rss_steps),
        decrements=tuple(decrements),
    )
    return path, fired


def _check_max_steps(problem: TransformedProblem, max_steps: int) -> int:
    limit = min(problem.n, problem.p)
    if not isinstance(max_steps, (int, np.integer)) or max_steps < 1:
        raise ParameterError(f"max_steps must be a positive integer, got {max_steps}")
    if max_steps > limit:
        raise ParameterError(
            f"max_steps={max_steps} exceeds min(n, p)={limit}"
        )
    return int(max_steps)


def df_path(problem: TransformedProblem, max_steps: int) -> ScreeningPath:
    """Run the decorrelated forward path for up to ``max_steps`` steps.

    Ties in the residual criterion resolve to the smallest column index. The
    loop ends early when every remaining candidate is degenerate or the
    residual hits the numerical floor.
    """
    max_steps = _check_max_steps(problem, max_steps)
    path, _ = _run_forward(problem, max_steps, stop=None)
    return path


def tdf_threshold(
    c: float,
    k: int,
    psi_op_norm_sq: float,
    n: int,
    p: int,
    identity_transform: bool,
) -> float:
    """Stopping threshold for step k.

    c * k * ||psi||_2^2 * log(log(n^{1/3})) * log(p), times sqrt(log(p))
    when the response needed a non-identity transform.
    """
    if c <= 0:
        raise ParameterError(f"c must be positive, got {c}")
    if k < 1:
        raise ParameterError(f"k must be >= 1, got {k}")
    if psi_op_norm_sq <= 0:
        raise ParameterError("psi_op_norm_sq must be positive")
    if p < 2:
        raise ParameterError(f"p must be >= 2, got {p}")
    if n <= 20:
        raise ParameterError(
            f"threshold undefined for n={n}: log(log(n^(1/3))) is nonpositive "
            "for n <= 20; need n >= 21"
        )
    base = c * k * psi_op_norm_sq * math.log(math.log(n ** (1.0 / 3.0))) * math.log(p)
    if not identity_transform:
        base *= math.sqrt(math.log(p))
    return base


def tdf_select(problem: TransformedProblem, c: float, max_steps: int) -> SelectionResult:
    """Thresholded decorrelated forward selection.

    Runs the forward loop; after step k, if the rss decrement is at or below
    the step threshold the loop stops and the step-k column is discarded.
    If the rule never fires the whole path is selected.
    """
    max_steps = _check_max_steps(problem, max_steps)
    if c <= 0:
        raise ParameterError(f"c must be positive, got {c}")
    if problem.p >= 2:
        # Surface threshold-domain errors before running the loop.
        tdf_threshold(c, 1, problem.psi_op_norm_sq, problem.n, problem.p,
                      problem.identity_transform)

    thresholds: list[float] = []

    def stop(k: int, dec: float) -> bool:
        if problem.p < 2:
            # log(p) = 0 makes the rule vacuous for a single candidate.
            cnk = 0.0
        else:
            cnk = tdf_threshold(
                c, k, problem.psi_op_norm_sq, problem.n, problem.p,
                problem.identity_transform,
            )
        thresholds.append(cnk)
        return dec <= cnk

    path, fired = _run_forward(problem, max_steps, stop=stop)
    if fired:
        selected = path.order[: fired - 1]
    else:
        selected = path.order
    return SelectionResult(
        selected=selected,
        stop_step=fired,
        thresholds=tuple(thresholds),
        path=path,
    )


def screen(
    X,
    y,
    link: LinkSpec,
    lam: float | None = None,
    c: float | None = None,
    standardize: bool = True,
    *,
    seed: int = 0,
    folds: int = 10,
    c_grid=None,
    max_steps: int | None = None,
) -> SelectionResult:
    """End-to-end screening pipeline.

    Standardizes the design (optional), transforms the response for the
    link, decorrelates, and runs thresholded forward selection. When ``lam``
    is absent the default ridge schedule is used; when ``c`` is absent it is
    chosen by cross-validation (seeded by ``seed``) and the CV report is
    attached to the result.

    Returns a SelectionResult carrying the selected indices, the stopping
    audit, and the lam/c actually used.
    """
    from .tuning import cv_select_c, default_lambda

    X = as_matrix(X)
    y = as_vector(y)
    check_same_rows(X, y)
    n, p = X.shape
    Xw = standardize_columns(X) if standardize else X

    lam_used = default_lambda(n, p) if lam is None else float(lam)
    budget = min(n, p) if max_steps is None else max_steps

    cv = None
    if c is None:
        cv = cv_select_c(
            Xw, y, link,
            lam=lam,
            c_grid=c_grid,
            folds=folds,
            seed=seed,
            max_steps=max_steps,
        )
        c_used = cv.chosen_c
    else:
        c_used = float(c)

    problem = build_problem(Xw, y, link, lam_used)
    result = tdf_select(problem, c_used, budget)
    return replace(result, lam=lam_used, c=c_used, cv=cv)
