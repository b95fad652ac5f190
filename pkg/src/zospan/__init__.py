"""Approximate shortest paths among zero-cost convex regions and convex obstacles."""
from .engine import NoPathError, QueryError, StructureB, WeightedPath
from .frechet import MinExResult, PolyCurve, build_free_space, minex, weak_frechet_decide
from .geom import EllipseRectShape, GeometryError, PolygonShape
from .scene import OBSTACLE, ZERO, Scene, SceneError

__version__ = "0.1.0"


def build(scene: Scene, epsilon: float | None = None, *, seed: int = 0, bounds=None) -> StructureB:
    """Build the query structure for ``scene``."""
    return StructureB(scene, epsilon, seed=seed, bounds=bounds)


__all__ = [
    "EllipseRectShape", "GeometryError", "PolygonShape", "OBSTACLE", "ZERO", "Scene", "SceneError",
    "NoPathError", "QueryError", "StructureB", "WeightedPath", "build",
    "MinExResult", "PolyCurve", "build_free_space", "minex", "weak_frechet_decide",
]
