import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from zospan import Scene
from zospan.estimator import ZeroOneInfSpanner
from zospan.geom import PolygonShape
from zospan.scene import ZERO


def square_scene():
    sq = PolygonShape([(0, 0), (1, 0), (1, 1), (0, 1)])
    return Scene([(sq, ZERO)], 0.5)


def test_fit_predict():
    est = ZeroOneInfSpanner(epsilon=0.25).fit(square_scene())
    w = est.predict([[0.2, 0.2, 0.8, 0.8], [-1, 0.5, 2, 0.5]])
    assert w[0] == 0.0 and w[1] == pytest.approx(2.0)
    assert est.n_vertices_ > 0 and est.theta_ > 0


def test_fit_from_dict():
    est = ZeroOneInfSpanner().fit(square_scene().to_dict())
    assert est.predict(np.array([[-1, 0.5, 2, 0.5]]))[0] == pytest.approx(2.0)


def test_params_and_clone():
    est = ZeroOneInfSpanner(epsilon=0.2, seed=3)
    assert est.get_params() == {"epsilon": 0.2, "seed": 3}
    c = clone(est)
    assert c.get_params() == est.get_params() and c is not est
    est.set_params(epsilon=0.1)
    assert est.epsilon == 0.1


def test_unfitted_and_bad_rows():
    with pytest.raises(NotFittedError):
        ZeroOneInfSpanner().predict([[0, 0, 1, 1]])
    est = ZeroOneInfSpanner().fit(square_scene())
    with pytest.raises(ValueError):
        est.predict([[0, 0, 1]])
