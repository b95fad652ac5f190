"""Direction sets and boundary sample points.

A region is represented in the graph by its sample points: boundary points
extreme in one of the ``m`` directions (original), landing points of
direction rays shot from other sample points (propagated), and touch points
of common tangents between obstacles (tangent).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .geom import ConvexShape, GeometryError, PolygonShape, ray_intersect

ORIGINAL = "original"
PROPAGATED = "propagated"
TANGENT = "tangent"
QUERY = "query"


@dataclass(frozen=True)
class DirectionSet:
    theta: float
    m: int
    directions: np.ndarray = field(repr=False)

    @classmethod
    def from_divisions(cls, j: int) -> "DirectionSet":
        """Directions spaced ``(pi/2)/j`` apart."""
        theta = (math.pi / 2) / j
        m = 4 * j
        ang = np.arange(m) * theta
        return cls(theta, m, np.column_stack([np.cos(ang), np.sin(ang)]))

    @property
    def quarter(self) -> int:
        """Index offset of the perpendicular direction."""
        return self.m // 4

    def angle(self, k: int) -> float:
        return (k % self.m) * self.theta

    def cone_of(self, vecs) -> np.ndarray:
        """Cone index ``floor(angle/theta)`` for each row of ``vecs``."""
        vecs = np.atleast_2d(vecs)
        ang = np.arctan2(vecs[:, 1], vecs[:, 0]) % (2 * math.pi)
        return np.minimum((ang / self.theta).astype(int), self.m - 1)


def theta_bound(epsilon: float, has_obstacles: bool) -> float:
    b = math.asin(epsilon / (1.0 + epsilon))
    return b / 2 if has_obstacles else b


def choose_theta(epsilon: float, has_obstacles: bool = False) -> DirectionSet:
    """Largest ``theta = (pi/2)/j`` meeting the accuracy bound and the strict cap.

    The cap is ``pi/6`` without obstacles and ``pi/12`` with them.
    """
    if not (0.0 < epsilon <= 1.0):
        raise ValueError(f"epsilon must lie in (0, 1], got {epsilon}")
    bound = theta_bound(epsilon, has_obstacles)
    cap_j = 6 if has_obstacles else 3  # theta < cap  <=>  j > cap_j
    j = max(cap_j + 1, math.ceil((math.pi / 2) / bound - 1e-9))
    while (math.pi / 2) / j > bound * (1 + 1e-12):
        j += 1
    return DirectionSet.from_divisions(j)


@dataclass
class SamplePoint:
    id: int
    location: np.ndarray
    kind: str
    region: int | None
    extreme_for: frozenset = frozenset()

    def __repr__(self) -> str:
        x, y = self.location
        return f"SamplePoint({self.id}, ({x:.6g}, {y:.6g}), {self.kind}, region={self.region})"


def _extreme_points(shape: ConvexShape, ds: DirectionSet):
    """Yield ``(point, k)`` for every extreme point in every direction."""
    if isinstance(shape, PolygonShape):
        V = shape.vertices
        proj = V @ ds.directions.T
        mx = proj.max(axis=0)
        for k in range(ds.m):
            idx = np.flatnonzero(proj[:, k] >= mx[k] - shape.eta)
            if len(idx) > 2:
                # collinear run: keep the two ends
                perp = np.array([-ds.directions[k][1], ds.directions[k][0]])
                along = V[idx] @ perp
                idx = np.array([idx[np.argmin(along)], idx[np.argmax(along)]])
            for i in idx:
                yield V[i], k
        return
    for k in range(ds.m):
        for p in shape.support(ds.directions[k]):
            yield p, k


def original_sample_points(shape: ConvexShape, ds: DirectionSet, region: int | None = None,
                           start_id: int = 0, tol: float | None = None) -> list[SamplePoint]:
    """Points of ``shape`` extreme in some direction of ``ds``.

    Points closer than ``tol`` are merged and keep the union of their
    directions; edge-extreme directions contribute both edge endpoints.
    """
    tol = shape.eta if tol is None else tol
    locs: list[np.ndarray] = []
    dirs: list[set] = []
    for p, k in _extreme_points(shape, ds):
        for i, q in enumerate(locs):
            if abs(q[0] - p[0]) <= tol and abs(q[1] - p[1]) <= tol and math.hypot(*(q - p)) <= tol:
                dirs[i].add(k)
                break
        else:
            locs.append(np.array(p, float))
            dirs.append({k})
    return [SamplePoint(start_id + i, locs[i], ORIGINAL, region, frozenset(dirs[i]))
            for i in range(len(locs))]


@dataclass
class SimplifiedRegion:
    region: int
    polygon: PolygonShape
    point_ids: list[int]

    @property
    def degenerate(self) -> bool:
        return self.polygon.n < 3


def simplify(shape: ConvexShape, points, region: int = -1, tol: float | None = None) -> SimplifiedRegion:
    """Inscribed polygon through the sample points in boundary order."""
    tol = shape.eta if tol is None else tol
    pts = list(points)
    if not pts:
        raise GeometryError("cannot simplify a region without sample points")
    keyed = sorted(pts, key=lambda sp: (shape.boundary_key(sp.location), sp.id))
    verts, ids = [], []
    for sp in keyed:
        if verts and math.hypot(*(verts[-1] - sp.location)) <= tol:
            continue
        verts.append(sp.location)
        ids.append(sp.id)
    if len(verts) > 1 and math.hypot(*(verts[-1] - verts[0])) <= tol:
        verts.pop()
        ids.pop()
    poly = PolygonShape(np.array(verts), check=False)
    if poly.n != len(ids):
        # reorientation or duplicate removal happened inside the polygon
        order = {tuple(v): i for v, i in zip(map(tuple, verts), ids)}
        ids = [order.get(tuple(v), -1) for v in poly.vertices]
    return SimplifiedRegion(region, poly, ids)


def assign_anchor(points) -> int:
    """Lowest-id original sample point (or lowest id overall if none is original)."""
    pts = list(points)
    if not pts:
        raise GeometryError("region has no sample points")
    orig = [p.id for p in pts if p.kind == ORIGINAL]
    return min(orig) if orig else min(p.id for p in pts)


def propagate(origin, u, shape: ConvexShape):
    """Landing point of the ray from ``origin`` along ``u`` on ``shape``, or ``None``."""
    hit = ray_intersect(origin, u, shape)
    return None if hit is None else hit[0]


def boundary_neighbours(shape: ConvexShape, points) -> list[tuple]:
    """Pairs of sample points adjacent along the boundary, counter-clockwise.

    Each pair ``(a, b)`` means walking counter-clockwise from ``a`` meets ``b``
    before any other sample point.
    """
    pts = sorted(points, key=lambda sp: (shape.boundary_key(sp.location), sp.id))
    if len(pts) < 2:
        return []
    if len(pts) == 2:
        return [(pts[0], pts[1]), (pts[1], pts[0])]
    return [(pts[i], pts[(i + 1) % len(pts)]) for i in range(len(pts))]
