import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from avcodes.estimator import ListDecoder


def test_params_round_trip():
    est = ListDecoder(field="2,3", sets=("full", (0, 1, 2, 3)), family="weighted:1,2:1", r=2)
    assert clone(est).get_params() == est.get_params()


def test_fit_predict_score():
    est = ListDecoder().fit()
    assert est.max_radius_ == 8 and est.n_features_in_ == 25
    rng = np.random.default_rng(0)
    c = est.code_
    Y = np.array([c.encode(rng.integers(0, 5, size=c.k)) for _ in range(4)])
    X = Y.copy()
    for row in X:
        pos = rng.choice(25, size=8, replace=False)
        row[pos] = (row[pos] + rng.integers(1, 5, size=8)) % 5
    assert est.score(X, Y) == 1.0
    pred = est.predict(X)
    assert pred.shape == X.shape
    assert all((p == -1).all() or (p == y).all() or np.count_nonzero(p != x) <= 8 for p, x, y in zip(pred, X, Y))


def test_not_fitted_and_bad_width():
    with pytest.raises(NotFittedError):
        ListDecoder().predict(np.zeros((1, 25), dtype=int))
    est = ListDecoder().fit()
    with pytest.raises(ValueError):
        est.predict(np.zeros((1, 24), dtype=int))
