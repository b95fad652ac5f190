"""Seeded random scenes for tests, benchmarks and the acceptance suite."""
from __future__ import annotations

import math

import numpy as np

from .geom import EllipseRectShape, PolygonShape
from .scene import OBSTACLE, ZERO, Scene


def random_convex_polygon(rng: np.random.Generator, center, radius: float, max_vertices: int = 12) -> PolygonShape:
    """Convex polygon inscribed in the disk ``(center, radius)``."""
    n = int(rng.integers(3, max_vertices + 1))
    while True:
        ang = np.sort(rng.uniform(0, 2 * math.pi, n))
        if np.max(np.diff(np.append(ang, ang[0] + 2 * math.pi))) < math.pi * 0.95:
            break
    r = radius * rng.uniform(0.6, 1.0)
    pts = np.column_stack([np.cos(ang), np.sin(ang)]) * r + np.asarray(center, float)
    return PolygonShape(pts, strict=False)


def random_disks(rng: np.random.Generator, n: int, box: float = 10.0, rmin: float = 0.5, rmax: float = 2.0,
                 gap: float = 0.05, tries: int = 2000):
    """Pairwise separated disks inside ``[0, box]^2``."""
    disks = []
    for _ in range(tries):
        if len(disks) == n:
            break
        r = rng.uniform(rmin, rmax)
        c = rng.uniform(r, box - r, 2)
        if all(math.hypot(*(c - d)) > r + q + gap for d, q in disks):
            disks.append((c, r))
    return disks


def random_scene(rng, n_zero: int, n_obstacles: int = 0, *, epsilon: float = 0.5, box: float = 10.0,
                 max_vertices: int = 12, curved: float = 0.0) -> Scene:
    """Random scene of disjoint convex regions.

    ``curved`` is the probability that a region is an ellipse instead of a polygon.
    """
    rng = np.random.default_rng(rng)
    disks = random_disks(rng, n_zero + n_obstacles, box)
    regions = []
    for i, (c, r) in enumerate(disks):
        if rng.uniform() < curved:
            rx = r * rng.uniform(0.5, 1.0)
            ry = r * rng.uniform(0.5, 1.0)
            shape = EllipseRectShape.from_ellipse(c[0], c[1], rx, ry, rng.uniform(0, math.pi))
        else:
            shape = random_convex_polygon(rng, c, r, max_vertices)
        regions.append((shape, ZERO if i < n_zero else OBSTACLE))
    return Scene(regions, epsilon)


def random_free_point(rng, scene: Scene, box: float = 10.0, margin: float = 1.0):
    """Uniform point in the padded box that is not inside an obstacle."""
    rng = np.random.default_rng(rng)
    while True:
        p = rng.uniform(-margin, box + margin, 2)
        if not any(r.shape.contains(p, tol=0.0) for r in scene.obstacles):
            return p
