"""Scenes: convex regions of weight 0 or infinity in a unit-weight plane."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .geom import (REL_ETA, ConvexShape, EllipseRectShape, GeometryError, PolygonShape,
                   shape_distance)

SCENE_VERSION = "zospan-scene/1"
ZERO = "zero"
OBSTACLE = "obstacle"


class SceneError(ValueError):
    """Invalid scene description."""


@dataclass(frozen=True)
class Region:
    shape: ConvexShape
    weight: str
    id: int

    @property
    def is_obstacle(self) -> bool:
        return self.weight == OBSTACLE

    @property
    def is_zero(self) -> bool:
        return self.weight == ZERO


class Scene:
    """Immutable collection of pairwise interior-disjoint convex regions."""

    def __init__(self, regions, epsilon: float = 0.5, *, validate: bool = True):
        self.epsilon = check_epsilon(epsilon)
        built = []
        for i, r in enumerate(regions):
            if isinstance(r, Region):
                shape, weight = r.shape, r.weight
            else:
                shape, weight = r
            if weight not in (ZERO, OBSTACLE):
                raise SceneError(f"region {i}: weight must be 'zero' or 'obstacle', got {weight!r}")
            if not isinstance(shape, ConvexShape):
                raise SceneError(f"region {i}: not a convex shape")
            if weight == OBSTACLE and _has_no_interior(shape):
                raise SceneError(f"region {i}: obstacles need a nonempty interior")
            built.append(Region(shape, weight, i))
        self.regions: tuple[Region, ...] = tuple(built)
        if validate:
            self._check_disjoint()

    # -- derived quantities -----------------------------------------------
    @property
    def zero_regions(self) -> list[Region]:
        return [r for r in self.regions if r.is_zero]

    @property
    def obstacles(self) -> list[Region]:
        return [r for r in self.regions if r.is_obstacle]

    @property
    def has_obstacles(self) -> bool:
        return any(r.is_obstacle for r in self.regions)

    def bbox(self, extra=()) -> tuple[float, float, float, float]:
        boxes = [r.shape.bbox for r in self.regions]
        for p in extra:
            boxes.append((p[0], p[1], p[0], p[1]))
        if not boxes:
            return (0.0, 0.0, 1.0, 1.0)
        b = np.array(boxes, float)
        return (float(b[:, 0].min()), float(b[:, 1].min()),
                float(b[:, 2].max()), float(b[:, 3].max()))

    @property
    def eta(self) -> float:
        x0, y0, x1, y1 = self.bbox()
        d = math.hypot(x1 - x0, y1 - y0)
        return REL_ETA * (d if d > 0 else 1.0)

    def _check_disjoint(self) -> None:
        regs = self.regions
        for i in range(len(regs)):
            bi = regs[i].shape.bbox
            for j in range(i + 1, len(regs)):
                bj = regs[j].shape.bbox
                # boxes meeting in at most a line cannot hold overlapping interiors
                if min(bi[2], bj[2]) <= max(bi[0], bj[0]) or min(bi[3], bj[3]) <= max(bi[1], bj[1]):
                    continue
                try:
                    shape_distance(regs[i].shape, regs[j].shape)
                except GeometryError:
                    raise SceneError(f"regions {i} and {j} overlap") from None

    def region_containing(self, p, *, strict: bool = True):
        """First region whose interior (or closure if not strict) holds ``p``."""
        for r in self.regions:
            if strict and r.shape.strictly_contains(p, tol=self.eta):
                return r
            if not strict and r.shape.contains(p, tol=self.eta):
                return r
        return None

    # -- serialization ------------------------------------------------------
    def to_dict(self) -> dict:
        return {
            "version": SCENE_VERSION,
            "epsilon": self.epsilon,
            "regions": [{"weight": r.weight, "shape": r.shape.to_dict()} for r in self.regions],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, data: dict, *, epsilon: float | None = None, validate: bool = True) -> "Scene":
        if not isinstance(data, dict):
            raise SceneError("scene must be a JSON object")
        version = data.get("version")
        if version != SCENE_VERSION:
            raise SceneError(f"unsupported scene version {version!r}")
        eps = data.get("epsilon", 0.5) if epsilon is None else epsilon
        raw = data.get("regions", [])
        if not isinstance(raw, list):
            raise SceneError("'regions' must be a list")
        regions = []
        for i, item in enumerate(raw):
            try:
                regions.append((shape_from_dict(item["shape"]), item["weight"]))
            except (KeyError, TypeError) as exc:
                raise SceneError(f"region {i}: missing or malformed field {exc}") from None
            except GeometryError as exc:
                raise SceneError(f"region {i}: {exc}") from None
        return cls(regions, eps, validate=validate)

    @classmethod
    def from_json(cls, text: str, **kw) -> "Scene":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SceneError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
        return cls.from_dict(data, **kw)

    @classmethod
    def load(cls, path, **kw) -> "Scene":
        with open(path, encoding="utf-8") as fh:
            return cls.from_json(fh.read(), **kw)

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.to_json())
            fh.write("\n")

    def __len__(self) -> int:
        return len(self.regions)

    def __repr__(self) -> str:
        return f"Scene(n={len(self.regions)}, epsilon={self.epsilon})"


def check_epsilon(epsilon) -> float:
    try:
        eps = float(epsilon)
    except (TypeError, ValueError):
        raise SceneError(f"epsilon must be a number, got {epsilon!r}") from None
    if not (0.0 < eps < 1.0):
        raise SceneError(f"epsilon must lie in (0, 1), got {eps}")
    return eps


def _has_no_interior(shape: ConvexShape) -> bool:
    if isinstance(shape, PolygonShape):
        return shape.n < 3 or shape.area <= 0.0
    if isinstance(shape, EllipseRectShape):
        return shape.classify() != "regular"
    return False


def shape_from_dict(d: dict) -> ConvexShape:
    if "polygon" in d:
        return PolygonShape(d["polygon"], strict=False)
    if "ellipse_rect" in d:
        e = d["ellipse_rect"]
        return EllipseRectShape.from_ellipse(e["cx"], e["cy"], e["rx"], e["ry"], e.get("rot", 0.0),
                                             e["xmin"], e["xmax"], e["ymin"], e["ymax"])
    if "quad_rect" in d:
        e = d["quad_rect"]
        return EllipseRectShape(e["M"], e["b"], e["c"], (e["xmin"], e["xmax"], e["ymin"], e["ymax"]))
    raise GeometryError(f"unknown shape keys {sorted(d)}")
