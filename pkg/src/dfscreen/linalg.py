"""Dense symmetric linear algebra behind the screening engine.

Three ingredients live here: the spectral inverse square root used to build
the decorrelation operator, incremental Gram-Schmidt bookkeeping for forward
selection, and a brute-force projection residual that serves as the test
oracle for the incremental path.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import DataError, DegeneracyError, NumericalError, ParameterError

# A candidate column whose orthogonal component has squared norm at or below
# this fraction of its original squared norm is treated as lying in the span
# of the current basis.
DEGENERACY_RTOL = 1e-12

_SYMMETRY_ATOL = 1e-12


@dataclass(frozen=True)
class SymEig:
    """Eigendecomposition of a symmetric matrix, eigenvalues descending."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


@dataclass(frozen=True)
class DecorrelationOperator:
    """The map psi = (X X^T / p + lam I)^{-1/2} together with its audit scalars.

    Attributes
    ----------
    psi : ndarray of shape (n, n)
        Symmetric positive-definite transform applied to rows of the problem.
    psi_op_norm_sq : float
        Squared operator (spectral) norm of psi.
    lam : float
        Ridge shift used when the operator was built.
    """

    psi: np.ndarray
    psi_op_norm_sq: float
    lam: float


@dataclass(frozen=True)
class ForwardState:
    """Bookkeeping for one forward-selection trajectory.

    ``basis`` holds an orthonormal basis of the span of the selected columns,
    ``residual`` is the response minus its projection onto that span, and
    ``rss`` is the squared norm of the residual.
    """

    selected: tuple[int, ...]
    basis: np.ndarray
    residual: np.ndarray
    rss: float


def sym_eig(M) -> SymEig:
    """Symmetric eigendecomposition with descending eigenvalues.

    Rejects matrices whose max-abs asymmetry exceeds 1e-12.
    """
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DataError(f"expected a square matrix, got shape {M.shape}")
    asym = float(np.max(np.abs(M - M.T))) if M.size else 0.0
    if asym > _SYMMETRY_ATOL:
        raise DataError(f"matrix is not symmetric (max asymmetry {asym:.3e})")
    try:
        vals, vecs = np.linalg.eigh(M)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigendecomposition failed to converge: {exc}") from exc
    return SymEig(eigenvalues=vals[::-1].copy(), eigenvectors=vecs[:, ::-1].copy())


def build_decorrelator(X, lam: float) -> DecorrelationOperator:
    """Build psi = (X X^T / p + lam I)^{-1/2} spectrally.

    Eigenvalues of the Gram matrix are floored at zero before the ridge
    shift so psi is positive definite for any lam > 0.
    """
    if lam <= 0:
        raise ParameterError(f"lam must be positive, got {lam}")
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[0] < 1 or X.shape[1] < 1:
        raise DataError(f"expected a non-empty n x p matrix, got shape {X.shape}")
    n, p = X.shape
    gram = X @ X.T / p
    gram = 0.5 * (gram + gram.T)
    eig = sym_eig(gram)
    vals = np.maximum(eig.eigenvalues, 0.0)
    shifted = vals + lam
    if np.any(shifted <= 0.0):
        raise NumericalError("shifted spectrum is not positive; cannot invert")
    Q = eig.eigenvectors
    psi = (Q * shifted ** -0.5) @ Q.T
    psi = 0.5 * (psi + psi.T)
    return DecorrelationOperator(
        psi=psi,
        psi_op_norm_sq=float(1.0 / (vals[-1] + lam)),
        lam=float(lam),
    )


def apply_decorrelator(op: DecorrelationOperator, X, ystar):
    """Apply psi to the design and to the transformed response."""
    X = np.asarray(X, dtype=float)
    ystar = np.asarray(ystar, dtype=float)
    n = op.psi.shape[0]
    if X.ndim != 2 or X.shape[0] != n:
        raise DataError(f"X must have {n} rows to match the operator, got {X.shape}")
    if ystar.shape != (n,):
        raise DataError(f"ystar must have shape ({n},), got {ystar.shape}")
    return op.psi @ X, op.psi @ ystar


def forward_init(ydec) -> ForwardState:
    """Empty-model state: no columns selected, residual equals the response."""
    ydec = np.asarray(ydec, dtype=float)
    if ydec.ndim != 1 or ydec.shape[0] < 1:
        raise DataError("ydec must be a non-empty vector")
    n = ydec.shape[0]
    return ForwardState(
        selected=(),
        basis=np.zeros((n, 0)),
        residual=ydec.copy(),
        rss=float(ydec @ ydec),
    )


def _orth_components(basis: np.ndarray, cols: np.ndarray) -> np.ndarray:
    """Components of cols orthogonal to span(basis), one reorthogonalization pass."""
    if basis.shape[1] == 0:
        return cols.copy()
    V = cols - basis @ (basis.T @ cols)
    V -= basis @ (basis.T @ V)
    return V


def drss_candidates(state: ForwardState, Xdec, exclude=None):
    """Decorrelated residual sums of squares for every candidate column.

    For each column j outside ``exclude``, computes the residual sum of
    squares after projecting the response onto span(basis + column j).
    Columns whose orthogonal component is degenerate report the current rss
    (no reduction) instead.

    Returns
    -------
    indices : ndarray of int
        Candidate column indices in ascending order.
    drss : ndarray of float
        Residual sum of squares per candidate.
    degenerate : ndarray of bool
        True where the candidate is numerically in the span of the basis.
    """
    Xdec = np.asarray(Xdec, dtype=float)
    if exclude is None:
        exclude = state.selected
    p = Xdec.shape[1]
    mask = np.ones(p, dtype=bool)
    mask[list(exclude)] = False
    indices = np.flatnonzero(mask)

    cols = Xdec[:, indices]
    V = _orth_components(state.basis, cols)
    nrm2 = np.einsum("ij,ij->j", V, V)
    base2 = np.einsum("ij,ij->j", cols, cols)
    degenerate = nrm2 <= DEGENERACY_RTOL * base2

    proj = V.T @ state.residual
    safe = np.where(degenerate, 1.0, nrm2)
    reduction = np.where(degenerate, 0.0, proj**2 / safe)
    drss = np.maximum(state.rss - reduction, 0.0)
    return indices, drss, degenerate


def forward_extend(state: ForwardState, Xdec, j: int) -> ForwardState:
    """Add column j to the state, orthonormalizing it against the basis."""
    Xdec = np.asarray(Xdec, dtype=float)
    if j in state.selected:
        raise ParameterError(f"column {j} is already selected")
    col = Xdec[:, j]
    v = _orth_components(state.basis, col[:, None])[:, 0]
    nrm2 = float(v @ v)
    if nrm2 <= DEGENERACY_RTOL * float(col @ col):
        raise DegeneracyError(
            f"column {j} is numerically in the span of the selected columns"
        )
    q = v / np.sqrt(nrm2)
    coef = float(q @ state.residual)
    residual = state.residual - coef * q
    rss = min(state.rss, float(residual @ residual))
    return ForwardState(
        selected=state.selected + (int(j),),
        basis=np.column_stack([state.basis, q]),
        residual=residual,
        rss=rss,
    )


def brute_force_drss(cols, y) -> float:
    """Projection residual via an explicit pseudo-inverse; the test oracle.

    Handles rank-deficient column sets; an empty column set returns ||y||^2.
    """
    y = np.asarray(y, dtype=float)
    cols = np.asarray(cols, dtype=float)
    if cols.ndim != 2:
        cols = cols.reshape(y.shape[0], -1)
    if cols.shape[1] == 0:
        return float(y @ y)
    if cols.shape[1] > cols.shape[0]:
        raise ParameterError("more columns than rows in brute_force_drss")
    gram = cols.T @ cols
    beta = np.linalg.pinv(gram) @ (cols.T @ y)
    resid = y - cols @ beta
    return float(resid @ resid)
