"""Scikit-learn compatible feature-selection estimators.

Thin wrappers over the functional API so the screeners drop into sklearn
pipelines: ``fit`` learns the support, ``transform`` keeps the selected
columns, ``get_support`` exposes the mask.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.feature_selection import SelectorMixin
from sklearn.utils.validation import check_is_fitted, check_X_y

from .baselines import default_top_k, ebic_select, fr_path
from .links import LinkSpec, parse_link, transform_response
from .screening import screen


def _as_link(link) -> LinkSpec:
    return link if isinstance(link, LinkSpec) else parse_link(link)


class DecorrelatedForwardScreener(SelectorMixin, BaseEstimator):
    """Thresholded decorrelated forward selection as a sklearn selector.

    Parameters
    ----------
    link : str or LinkSpec, default="identity"
        Model family: "identity", "logit", "log", "power:1/3", "power:1/5".
    lam : float or None
        Ridge shift for the decorrelator; defaults to the built-in schedule.
    c : float or None
        Stopping constant; cross-validated when None.
    standardize : bool, default=True
        Center and scale columns before screening.
    cv_folds : int, default=10
    c_grid : sequence of float or None
        Grid for the cross-validation of c.
    max_steps : int or None
        Cap on the forward path length.
    random_state : int, default=0
        Seed for the cross-validation fold shuffle.

    Attributes
    ----------
    selected_ : ndarray of int
        Selected column indices in selection order.
    support_ : ndarray of bool
        Mask over input columns.
    result_ : SelectionResult
        Full audit (path, thresholds, lam/c used, CV report).
    """

    def __init__(
        self,
        link="identity",
        lam=None,
        c=None,
        standardize=True,
        cv_folds=10,
        c_grid=None,
        max_steps=None,
        random_state=0,
    ):
        self.link = link
        self.lam = lam
        self.c = c
        self.standardize = standardize
        self.cv_folds = cv_folds
        self.c_grid = c_grid
        self.max_steps = max_steps
        self.random_state = random_state

    def fit(self, X, y):
        X, y = check_X_y(X, y, dtype=float, y_numeric=True)
        result = screen(
            X,
            y,
            _as_link(self.link),
            lam=self.lam,
            c=self.c,
            standardize=self.standardize,
            seed=self.random_state,
            folds=self.cv_folds,
            c_grid=self.c_grid,
            max_steps=self.max_steps,
        )
        self.result_ = result
        self.selected_ = np.array(result.selected, dtype=int)
        self.n_features_in_ = X.shape[1]
        mask = np.zeros(X.shape[1], dtype=bool)
        mask[self.selected_] = True
        self.support_ = mask
        return self

    def _get_support_mask(self):
        check_is_fitted(self, "support_")
        return self.support_


class ForwardRegressionScreener(SelectorMixin, BaseEstimator):
    """Classical forward regression with extended-BIC model choice.

    Parameters
    ----------
    link : str or LinkSpec, default="identity"
        Response transform applied before the least-squares loop.
    gamma : float, default=1.0
        Extended-BIC tail weight in [0, 1]; 0 recovers plain BIC.
    max_steps : int or None
        Path budget; defaults to ceil(n / log n).
    """

    def __init__(self, link="identity", gamma=1.0, max_steps=None):
        self.link = link
        self.gamma = gamma
        self.max_steps = max_steps

    def fit(self, X, y):
        X, y = check_X_y(X, y, dtype=float, y_numeric=True)
        n, p = X.shape
        ystar = transform_response(y, _as_link(self.link)).ystar
        budget = self.max_steps
        if budget is None:
            budget = min(default_top_k(n), n - 2, p)
        path = fr_path(X, ystar, budget)
        selected = ebic_select(path, X, ystar, gamma=self.gamma, max_size=budget)
        self.path_ = path
        self.selected_ = np.array(selected, dtype=int)
        self.n_features_in_ = p
        mask = np.zeros(p, dtype=bool)
        mask[self.selected_] = True
        self.support_ = mask
        return self

    def _get_support_mask(self):
        check_is_fitted(self, "support_")
        return self.support_
