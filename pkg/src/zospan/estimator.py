"""scikit-learn style wrapper: fit on a scene, predict path weights."""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array, check_is_fitted

from .engine import StructureB
from .scene import Scene


class ZeroOneInfSpanner(BaseEstimator):
    """Approximate shortest paths among 0-regions and obstacles.

    ``fit`` takes a :class:`Scene` (or its dict form) and builds the query
    structure. ``predict`` takes rows ``(sx, sy, tx, ty)`` and returns the
    realized path weights.
    """

    def __init__(self, epsilon: float = 0.5, seed: int = 0):
        self.epsilon = epsilon
        self.seed = seed

    def fit(self, X, y=None):
        scene = X if isinstance(X, Scene) else Scene.from_dict(X, epsilon=self.epsilon)
        self.structure_ = StructureB(scene, self.epsilon, seed=self.seed)
        self.n_vertices_ = self.structure_.n_vertices
        self.n_edges_ = self.structure_.n_edges
        self.theta_ = self.structure_.ds.theta
        return self

    def paths(self, X) -> list:
        check_is_fitted(self, "structure_")
        Q = check_array(X, dtype=float)
        if Q.shape[1] != 4:
            raise ValueError(f"expected rows (sx, sy, tx, ty), got {Q.shape[1]} columns")
        return [self.structure_.query(q[:2], q[2:]) for q in Q]

    def predict(self, X) -> np.ndarray:
        return np.array([p.weight for p in self.paths(X)])
