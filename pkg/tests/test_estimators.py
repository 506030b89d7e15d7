import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError
from sklearn.linear_model import LinearRegression
from sklearn.pipeline import Pipeline

from dfscreen.estimators import DecorrelatedForwardScreener, ForwardRegressionScreener


def strong_data(seed=0, n=80, p=40):
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((n, p))
    beta = np.zeros(p)
    beta[:3] = [3.0, -3.0, 2.5]
    y = X @ beta + rng.standard_normal(n)
    return X, y


class TestDecorrelatedForwardScreener:
    def test_fit_recovers_support(self):
        X, y = strong_data()
        est = DecorrelatedForwardScreener(c=0.5, standardize=False).fit(X, y)
        assert {0, 1, 2} <= set(est.selected_)
        assert est.support_.sum() == len(est.selected_)

    def test_transform_keeps_selected_columns(self):
        X, y = strong_data(1)
        est = DecorrelatedForwardScreener(c=0.5, standardize=False).fit(X, y)
        Xt = est.transform(X)
        assert Xt.shape == (X.shape[0], len(est.selected_))
        mask = est.get_support()
        assert np.array_equal(Xt, X[:, mask])

    def test_cv_runs_when_c_absent(self):
        X, y = strong_data(2, n=60, p=30)
        est = DecorrelatedForwardScreener(standardize=False, random_state=3).fit(X, y)
        assert est.result_.cv is not None
        assert est.result_.c == est.result_.cv.chosen_c

    def test_unfitted_raises(self):
        with pytest.raises(NotFittedError):
            DecorrelatedForwardScreener().transform(np.zeros((3, 4)))

    def test_clone_round_trip(self):
        est = DecorrelatedForwardScreener(link="logit", c=1.5, cv_folds=5)
        params = est.get_params()
        cloned = clone(est)
        assert cloned.get_params() == params

    def test_composes_in_pipeline(self):
        X, y = strong_data(4)
        pipe = Pipeline([
            ("select", DecorrelatedForwardScreener(c=0.5, standardize=False)),
            ("fit", LinearRegression()),
        ]).fit(X, y)
        r2 = pipe.score(X, y)
        assert r2 > 0.9


class TestForwardRegressionScreener:
    def test_fit_recovers_support(self):
        X, y = strong_data(5)
        est = ForwardRegressionScreener().fit(X, y)
        assert set(est.selected_) == {0, 1, 2}

    def test_gamma_zero_allowed(self):
        X, y = strong_data(6, n=50, p=20)
        est = ForwardRegressionScreener(gamma=0.0).fit(X, y)
        assert {0, 1, 2} <= set(est.selected_)

    def test_support_mask_shape(self):
        X, y = strong_data(7, n=40, p=15)
        est = ForwardRegressionScreener().fit(X, y)
        assert est.get_support().shape == (15,)
