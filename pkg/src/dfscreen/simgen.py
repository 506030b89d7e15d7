"""Seeded data generators, response samplers, metrics, and the replication
runner for the comparison harness."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.special import expit

from .baselines import default_top_k, ebic_select, fr_path, holp_rank, sis_rank, wrh_rank
from .exceptions import NumericalError, ParameterError, ReplicationError
from .linalg import sym_eig
from .links import IDENTITY, LOG, LOGIT, LinkSpec, transform_response
from .screening import screen
from .tuning import default_lambda
from .validation import standardize_columns

SCENARIOS = ("ar1", "blockcs", "factor_toy")
METHODS = ("TDF", "FBIC", "HOLP_EBIC", "SIS_TOPK", "WRH_TOPK")

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15


@dataclass(frozen=True)
class ScenarioConfig:
    """One simulation cell: generator, shape, correlation, link, signal."""

    scenario: str
    n: int
    p: int
    rho: float
    link: LinkSpec
    beta: np.ndarray
    replications: int
    seed: int

    def __post_init__(self):
        if self.scenario not in SCENARIOS:
            raise ParameterError(
                f"unknown scenario {self.scenario!r}; use one of {SCENARIOS}"
            )
        if not 0.0 <= self.rho < 1.0:
            raise ParameterError(f"rho must lie in [0, 1), got {self.rho}")
        beta = np.asarray(self.beta, dtype=float)
        if beta.shape != (self.p,):
            raise ParameterError(
                f"beta must have length p={self.p}, got {beta.shape}"
            )
        object.__setattr__(self, "beta", beta)
        if self.replications < 1:
            raise ParameterError("replications must be >= 1")

    @property
    def truth(self) -> frozenset[int]:
        return frozenset(int(j) for j in np.flatnonzero(self.beta))


@dataclass(frozen=True)
class Metrics:
    """Monte-Carlo mean and sample sd of TP, FP, and the coverage indicator."""

    tp_mean: float
    tp_sd: float
    fp_mean: float
    fp_sd: float
    cr_mean: float
    cr_sd: float


def _check_rho(rho: float) -> float:
    if not 0.0 <= rho < 1.0:
        raise ParameterError(f"rho must lie in [0, 1), got {rho}")
    return float(rho)


def gen_ar1(n: int, p: int, rho: float, rng: np.random.Generator) -> np.ndarray:
    """Rows i.i.d. N(0, Sigma) with Sigma_ij = rho^|i-j|, via the exact
    first-order recursion (unit marginals by construction)."""
    rho = _check_rho(rho)
    if n < 1 or p < 1:
        raise ParameterError("n and p must be positive")
    Z = rng.standard_normal((n, p))
    X = np.empty((n, p))
    X[:, 0] = Z[:, 0]
    scale = math.sqrt(1.0 - rho * rho)
    for j in range(1, p):
        X[:, j] = rho * X[:, j - 1] + scale * Z[:, j]
    return X


def _cs_sqrt_apply(F: np.ndarray, rho: float) -> np.ndarray:
    # Compound symmetry Sigma = (1-rho) I + rho 11^T has square root
    # s2 I + (s1 - s2) J/p with s1 = sqrt(1 + (p-1) rho), s2 = sqrt(1 - rho).
    p = F.shape[1]
    s1 = math.sqrt(1.0 + (p - 1) * rho)
    s2 = math.sqrt(1.0 - rho)
    return s2 * F + (s1 - s2) * F.mean(axis=1, keepdims=True)


def cs_sqrt_matrix(p: int, rho: float) -> np.ndarray:
    """Explicit compound-symmetry square root (exposed for verification)."""
    rho = _check_rho(rho)
    s1 = math.sqrt(1.0 + (p - 1) * rho)
    s2 = math.sqrt(1.0 - rho)
    return s2 * np.eye(p) + (s1 - s2) * np.full((p, p), 1.0 / p)


def gen_blockcs(n: int, p: int, rho: float, rng: np.random.Generator) -> np.ndarray:
    """Block compound symmetry: v = Sigma^{1/2} f, then subtract
    0.6 * rho * v_1 from every column past the third."""
    rho = _check_rho(rho)
    if p < 4:
        raise ParameterError(f"blockcs needs p >= 4, got {p}")
    F = rng.standard_normal((n, p))
    V = _cs_sqrt_apply(F, rho)
    a = V[:, 0]
    X = V.copy()
    X[:, 3:] -= 0.6 * rho * a[:, None]
    return X


def ar1_sqrt_matrix(p: int, rho: float) -> np.ndarray:
    """Symmetric square root of the first-order autoregressive covariance."""
    rho = _check_rho(rho)
    idx = np.arange(p)
    sigma = rho ** np.abs(idx[:, None] - idx[None, :])
    eig = sym_eig(sigma)
    vals = np.maximum(eig.eigenvalues, 0.0)
    Q = eig.eigenvectors
    return (Q * np.sqrt(vals)) @ Q.T


def gen_factor_toy(n: int, p: int, rho: float, rng: np.random.Generator) -> np.ndarray:
    """Factor structure x = B f + u with B^2 autoregressive and u uniform
    on (0, 0.5); the factor dimension equals p."""
    rho = _check_rho(rho)
    B = ar1_sqrt_matrix(p, rho)
    F = rng.standard_normal((n, p))
    U = rng.uniform(0.0, 0.5, size=(n, p))
    return F @ B + U


def gen_response(X, beta, link: LinkSpec, rng: np.random.Generator) -> np.ndarray:
    """Sample responses for the linear predictor X beta under the link."""
    X = np.asarray(X, dtype=float)
    beta = np.asarray(beta, dtype=float)
    eta = X @ beta
    if link.kind == IDENTITY:
        return eta + rng.standard_normal(X.shape[0])
    if link.kind == LOGIT:
        return rng.binomial(1, expit(eta)).astype(float)
    if link.kind == LOG:
        if np.any(eta > 30.0):
            raise NumericalError(
                f"Poisson rate overflow: max linear predictor "
                f"{float(eta.max()):.2f} > 30"
            )
        return rng.poisson(np.exp(eta)).astype(float)
    raise ParameterError(f"gen_response supports identity, logit, log; got {link.kind}")


_GENERATORS: dict[str, Callable] = {
    "ar1": gen_ar1,
    "blockcs": gen_blockcs,
    "factor_toy": gen_factor_toy,
}


def evaluate(selected, truth) -> tuple[int, int, float]:
    """True positives, false positives, and the coverage indicator."""
    selected = set(int(j) for j in selected)
    truth = set(int(j) for j in truth)
    tp = len(selected & truth)
    fp = len(selected - truth)
    cr = 1.0 if truth <= selected else 0.0
    return tp, fp, cr


def _mix64(z: int) -> int:
    z &= _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


def derive_seed(master_seed: int, index: int) -> int:
    """Independent child seed for stream ``index``; adding more streams never
    changes earlier ones."""
    return _mix64((master_seed + (index + 1) * _GAMMA) & _MASK64)


def select_features(
    method: str,
    X,
    y,
    link: LinkSpec,
    *,
    lam: float | None = None,
    c: float | None = None,
    seed: int = 0,
) -> list[int]:
    """Run one comparison method and return its selected column indices.

    TDF runs the full pipeline (cross-validated c unless fixed). FBIC is
    forward regression plus extended-BIC choice; HOLP_EBIC applies the same
    criterion along the ridge-projection ranking. SIS_TOPK and WRH_TOPK
    keep the top ceil(n / log n) ranked columns.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    n, p = X.shape
    method = method.upper()
    if method not in METHODS:
        raise ParameterError(f"unknown method {method!r}; use one of {METHODS}")

    if method == "TDF":
        result = screen(X, y, link, lam=lam, c=c, standardize=False, seed=seed)
        return list(result.selected)

    ystar = transform_response(y, link).ystar
    budget = min(default_top_k(n), n - 2, p)
    if method == "FBIC":
        path = fr_path(X, ystar, min(budget, n, p))
        return ebic_select(path, X, ystar, gamma=1.0, max_size=budget)
    lam_r = default_lambda(n, p) if lam is None else lam
    if method == "HOLP_EBIC":
        rank = holp_rank(X, ystar, lam_r)
        return ebic_select(rank, X, ystar, gamma=1.0, max_size=budget)
    if method == "SIS_TOPK":
        rank = sis_rank(standardize_columns(X), ystar)
        return [int(j) for j in rank.order[:budget]]
    rank = wrh_rank(X, ystar, lam_r)
    return [int(j) for j in rank.order[:budget]]


def _summary(values: np.ndarray) -> tuple[float, float]:
    mean = float(values.mean())
    sd = float(values.std(ddof=1)) if values.size > 1 else 0.0
    return mean, sd


def _one_replication(config: ScenarioConfig, methods, rep: int, on_dataset=None):
    rep_seed = derive_seed(config.seed, rep)
    rng = np.random.default_rng(rep_seed)
    gen = _GENERATORS[config.scenario]
    X = gen(config.n, config.p, config.rho, rng)
    y = gen_response(X, config.beta, config.link, rng)
    method_seed = int(rng.integers(2**63))
    if on_dataset is not None:
        on_dataset(rep, X, y)
    out = {}
    for method in methods:
        try:
            sel = select_features(method, X, y, config.link, seed=method_seed)
        except Exception as exc:
            raise ReplicationError(
                f"method {method} failed on replication {rep} "
                f"(seed {rep_seed}): {exc}"
            ) from exc
        out[method] = evaluate(sel, config.truth)
    return out


def run_experiment(
    config: ScenarioConfig,
    methods,
    n_jobs: int = 1,
    on_dataset=None,
) -> dict[str, Metrics]:
    """Run the Monte-Carlo comparison and summarize TP/FP/CR per method.

    Replication r draws its data from an independently derived seed, so the
    table is deterministic given the master seed and unchanged by adding
    replications. A failing method aborts the whole run with the offending
    seed in the message. ``on_dataset(rep, X, y)`` is invoked per
    replication when given (dataset dumping). ``n_jobs`` > 1 runs
    replications on a thread pool; results are collected in replication
    order and do not depend on scheduling.
    """
    methods = [m.upper() for m in methods]
    for m in methods:
        if m not in METHODS:
            raise ParameterError(f"unknown method {m!r}; use one of {METHODS}")

    reps = range(config.replications)
    if n_jobs > 1 and config.replications > 1:
        with ThreadPoolExecutor(max_workers=n_jobs) as pool:
            results = list(pool.map(
                lambda r: _one_replication(config, methods, r, on_dataset), reps
            ))
    else:
        results = [_one_replication(config, methods, r, on_dataset) for r in reps]

    table: dict[str, Metrics] = {}
    for method in methods:
        tp = np.array([res[method][0] for res in results], dtype=float)
        fp = np.array([res[method][1] for res in results], dtype=float)
        cr = np.array([res[method][2] for res in results], dtype=float)
        tp_m, tp_s = _summary(tp)
        fp_m, fp_s = _summary(fp)
        cr_m, cr_s = _summary(cr)
        table[method] = Metrics(tp_m, tp_s, fp_m, fp_s, cr_m, cr_s)
    return table
