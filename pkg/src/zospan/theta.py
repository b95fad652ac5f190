"""Theta-graphs over sample points, optionally around convex obstacles.

Every point is the apex of ``m`` cones ``[i*theta, (i+1)*theta)``; in each
cone it is joined to the point with the smallest projection onto the cone
bisector (ties go to the lower id). With obstacles only visible points are
candidates: a segment is blocked when it runs through an obstacle interior.
"""
from __future__ import annotations

import math

import numba
import numpy as np
from scipy.spatial import cKDTree

from .sampling import DirectionSet


class ObstacleSet:
    """Convex polygons packed into flat arrays for the visibility kernels."""

    def __init__(self, polygons=(), tol: float = 1e-9):
        ptr = [0]
        xy, nrm, off, box = [], [], [], []
        for v in polygons:
            v = _corners(np.asarray(v, float))
            if len(v) < 3:
                continue
            e = np.roll(v, -1, axis=0) - v
            n = np.column_stack([e[:, 1], -e[:, 0]])
            n /= np.hypot(n[:, 0], n[:, 1])[:, None]
            xy.append(v)
            nrm.append(n)
            off.append(np.einsum("ij,ij->i", n, v))
            box.append([v[:, 0].min(), v[:, 1].min(), v[:, 0].max(), v[:, 1].max()])
            ptr.append(ptr[-1] + len(v))
        self.ptr = np.array(ptr, dtype=np.int64)
        self.nrm = np.vstack(nrm) if nrm else np.zeros((0, 2))
        self.off = np.concatenate(off) if off else np.zeros(0)
        self.box = np.array(box, float).reshape(-1, 4)
        self.tol = float(tol)

    def __len__(self) -> int:
        return len(self.ptr) - 1

    def blocked(self, a, b) -> bool:
        return bool(_blocked(a[0], a[1], b[0], b[1], self.ptr, self.nrm, self.off, self.box, self.tol))

    def blocked_many(self, a, B) -> np.ndarray:
        B = np.asarray(B, float).reshape(-1, 2)
        return _blocked_many(float(a[0]), float(a[1]), B, self.ptr, self.nrm, self.off, self.box, self.tol)


def _corners(v: np.ndarray) -> np.ndarray:
    """Drop collinear vertices; they do not change the polygon."""
    if len(v) < 3:
        return v
    keep = []
    n = len(v)
    scale = max(float(np.ptp(v[:, 0])), float(np.ptp(v[:, 1])), 1e-300)
    for i in range(n):
        a, b, c = v[i - 1], v[i], v[(i + 1) % n]
        o = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
        if abs(o) > 1e-13 * scale * scale:
            keep.append(i)
    return v[keep]


@numba.njit(cache=True)
def _blocked(ax, ay, bx, by, ptr, nrm, off, box, tol):
    dx = bx - ax
    dy = by - ay
    L = math.sqrt(dx * dx + dy * dy)
    if L <= tol:
        return False
    lo_x = min(ax, bx)
    hi_x = max(ax, bx)
    lo_y = min(ay, by)
    hi_y = max(ay, by)
    for o in range(ptr.shape[0] - 1):
        if hi_x <= box[o, 0] + tol or lo_x >= box[o, 2] - tol or hi_y <= box[o, 1] + tol or lo_y >= box[o, 3] - tol:
            continue
        t0 = 0.0
        t1 = 1.0
        empty = False
        for e in range(ptr[o], ptr[o + 1]):
            num = off[e] - (nrm[e, 0] * ax + nrm[e, 1] * ay)
            den = nrm[e, 0] * dx + nrm[e, 1] * dy
            if abs(den) <= 1e-15 * L:
                if num < 0.0:
                    empty = True
                    break
            elif den > 0.0:
                t = num / den
                if t < t1:
                    t1 = t
            else:
                t = num / den
                if t > t0:
                    t0 = t
            if t0 > t1:
                empty = True
                break
        if empty or (t1 - t0) * L <= tol:
            continue
        mx = ax + 0.5 * (t0 + t1) * dx
        my = ay + 0.5 * (t0 + t1) * dy
        depth = 1e300
        for e in range(ptr[o], ptr[o + 1]):
            d = off[e] - (nrm[e, 0] * mx + nrm[e, 1] * my)
            if d < depth:
                depth = d
        if depth > tol:
            return True
    return False


@numba.njit(cache=True)
def _blocked_many(ax, ay, B, ptr, nrm, off, box, tol):
    out = np.zeros(B.shape[0], dtype=np.bool_)
    for j in range(B.shape[0]):
        out[j] = _blocked(ax, ay, B[j, 0], B[j, 1], ptr, nrm, off, box, tol)
    return out


@numba.njit(cache=True)
def _cone_nearest(i, P, n, theta, m, bis, ptr, nrm, off, box, tol, use_obs, out_idx, out_proj):
    """Fill ``out_idx/out_proj`` (length m) with the cone-nearest points of ``P[i]``
    among ``P[:n]``."""
    ax = P[i, 0]
    ay = P[i, 1]
    cone = np.empty(n, dtype=np.int64)
    proj = np.empty(n)
    valid = np.zeros(n, dtype=np.bool_)
    two_pi = 2.0 * math.pi
    for j in range(n):
        if j == i:
            continue
        dx = P[j, 0] - ax
        dy = P[j, 1] - ay
        if dx * dx + dy * dy <= tol * tol:
            continue
        a = math.atan2(dy, dx) % two_pi
        c = int(a / theta)
        if c >= m:
            c = m - 1
        cone[j] = c
        proj[j] = dx * bis[c, 0] + dy * bis[c, 1]
        valid[j] = True
    for c in range(m):
        out_idx[c] = -1
        out_proj[c] = np.inf
    for j in range(n):
        if valid[j]:
            c = cone[j]
            if proj[j] < out_proj[c]:
                out_proj[c] = proj[j]
                out_idx[c] = j
    if not use_obs:
        return
    # the unconstrained nearest point is usually visible; sort only cones where it is not
    open_cone = np.zeros(m, dtype=np.bool_)
    any_open = False
    for c in range(m):
        j = out_idx[c]
        if j >= 0 and _blocked(ax, ay, P[j, 0], P[j, 1], ptr, nrm, off, box, tol):
            open_cone[c] = True
            any_open = True
            out_idx[c] = -1
            out_proj[c] = np.inf
    if not any_open:
        return
    # a cone pointing strictly into an obstacle the apex lies on holds no visible point
    for o in range(ptr.shape[0] - 1):
        if ax < box[o, 0] - tol or ax > box[o, 2] + tol or ay < box[o, 1] - tol or ay > box[o, 3] + tol:
            continue
        depth = 1e300
        for e in range(ptr[o], ptr[o + 1]):
            d = off[e] - (nrm[e, 0] * ax + nrm[e, 1] * ay)
            if d < depth:
                depth = d
        if depth < -tol or depth > tol:
            continue
        for c in range(m):
            if not open_cone[c]:
                continue
            inward = True
            for side in range(2):
                ang = (c + side) * theta
                ux = math.cos(ang)
                uy = math.sin(ang)
                for e in range(ptr[o], ptr[o + 1]):
                    # short edges near the apex count too, since a grazing segment can slip past them
                    if off[e] - (nrm[e, 0] * ax + nrm[e, 1] * ay) <= 1e3 * tol:
                        if nrm[e, 0] * ux + nrm[e, 1] * uy > -1e-6:
                            inward = False
                            break
                if not inward:
                    break
            if inward:
                open_cone[c] = False
    any_open = False
    for c in range(m):
        if open_cone[c]:
            any_open = True
    if not any_open:
        return
    cnt = 0
    for j in range(n):
        if valid[j] and open_cone[cone[j]]:
            cnt += 1
    cand = np.empty(cnt, dtype=np.int64)
    keys = np.empty(cnt)
    k = 0
    for j in range(n):
        if valid[j] and open_cone[cone[j]]:
            cand[k] = j
            keys[k] = proj[j]
            k += 1
    order = np.argsort(keys, kind="mergesort")
    for r in range(cnt):
        j = cand[order[r]]
        c = cone[j]
        if not open_cone[c]:
            continue
        if not _blocked(ax, ay, P[j, 0], P[j, 1], ptr, nrm, off, box, tol):
            open_cone[c] = False
            out_idx[c] = j
            out_proj[c] = proj[j]


@numba.njit(cache=True)
def _build_all(P, theta, m, bis, ptr, nrm, off, box, tol, use_obs):
    n = P.shape[0]
    idx = np.full((n, m), -1, dtype=np.int64)
    prj = np.full((n, m), np.inf)
    oi = np.empty(m, dtype=np.int64)
    op = np.empty(m)
    for i in range(n):
        _cone_nearest(i, P, n, theta, m, bis, ptr, nrm, off, box, tol, use_obs, oi, op)
        idx[i, :] = oi
        prj[i, :] = op
    return idx, prj


class ThetaGraph:
    """Cone-nearest structure over a point set, with incremental insertion.

    ``regions[i]`` is the owning region of point ``i``; edges between points
    of the same region are not reported. Coincident points of different
    regions are joined by zero-length edges.
    """

    def __init__(self, points, regions, ds: DirectionSet, obstacles: ObstacleSet | None = None,
                 tol: float = 1e-9):
        self.ds = ds
        self.tol = float(tol)
        self.P = np.asarray(points, float).reshape(-1, 2).copy()
        self.regions = np.asarray(regions, dtype=np.int64).reshape(-1).copy()
        self.obstacles = obstacles if obstacles is not None else ObstacleSet(tol=tol)
        ang = (np.arange(ds.m) + 0.5) * ds.theta
        self._bis = np.column_stack([np.cos(ang), np.sin(ang)])
        if len(self.P):
            self.nearest, self.nearest_proj = _build_all(self.P, ds.theta, ds.m, self._bis,
                                                         *self._obs_args(), self.tol, self._use_obs)
        else:
            self.nearest = np.zeros((0, ds.m), dtype=np.int64)
            self.nearest_proj = np.zeros((0, ds.m))
        self.extra: list[tuple[int, int]] = []

    @property
    def _use_obs(self) -> bool:
        return len(self.obstacles) > 0

    def _obs_args(self):
        o = self.obstacles
        return o.ptr, o.nrm, o.off, o.box

    def __len__(self) -> int:
        return len(self.P)

    def copy(self) -> "ThetaGraph":
        g = ThetaGraph.__new__(ThetaGraph)
        g.ds, g.tol, g.obstacles, g._bis = self.ds, self.tol, self.obstacles, self._bis
        g.P = self.P.copy()
        g.regions = self.regions.copy()
        g.nearest = self.nearest.copy()
        g.nearest_proj = self.nearest_proj.copy()
        g.extra = list(self.extra)
        return g

    # -- edges ------------------------------------------------------------
    def directed_edges(self):
        """``(i, j)`` for every cone-nearest link (same-region links included)."""
        i, c = np.nonzero(self.nearest >= 0)
        return list(zip(i.tolist(), self.nearest[i, c].tolist()))

    def edges(self) -> list[tuple[int, int, float]]:
        """Undirected edges between different regions, with lengths."""
        pairs = set()
        for i, j in self.directed_edges() + self.extra:
            if self.regions[i] != self.regions[j]:
                pairs.add((min(i, j), max(i, j)))
        for i, j in self.coincident_pairs():
            pairs.add((i, j))
        out = []
        for i, j in sorted(pairs):
            out.append((i, j, float(np.hypot(*(self.P[i] - self.P[j])))))
        return out

    def coincident_pairs(self) -> list[tuple[int, int]]:
        if len(self.P) < 2:
            return []
        out = []
        for i, j in cKDTree(self.P).query_pairs(self.tol):
            if self.regions[i] != self.regions[j]:
                out.append((min(i, j), max(i, j)))
        return sorted(out)

    # -- insertion --------------------------------------------------------
    def insert_point(self, p, region: int) -> tuple[int, list[tuple[int, int, float]]]:
        """Add a point; returns its index and the new edges incident to it.

        Forward edges join the point to its cone-nearest points; reverse
        repairs join it to every existing point for which it becomes the new
        cone-nearest point.
        """
        p = np.asarray(p, float).reshape(2)
        n = len(self.P)
        self.P = np.vstack([self.P, p[None, :]])
        self.regions = np.append(self.regions, region)
        oi = np.empty(self.ds.m, dtype=np.int64)
        op = np.empty(self.ds.m)
        _cone_nearest(n, self.P, n + 1, self.ds.theta, self.ds.m, self._bis, *self._obs_args(),
                      self.tol, self._use_obs, oi, op)
        self.nearest = np.vstack([self.nearest, oi[None, :]])
        self.nearest_proj = np.vstack([self.nearest_proj, op[None, :]])
        linked = {int(j) for j in oi if j >= 0}
        if n:
            d = p[None, :] - self.P[:n]
            dist2 = np.einsum("ij,ij->i", d, d)
            cone = self.ds.cone_of(d)
            proj = np.einsum("ij,ij->i", d, self._bis[cone])
            cur = self.nearest_proj[np.arange(n), cone]
            cand = np.flatnonzero((proj < cur) & (dist2 > self.tol * self.tol))
            if len(cand) and self._use_obs:
                blocked = self.obstacles.blocked_many(p, self.P[cand])
                cand = cand[~blocked]
            self.nearest[cand, cone[cand]] = n
            self.nearest_proj[cand, cone[cand]] = proj[cand]
            linked.update(int(j) for j in cand)
            near = np.flatnonzero(dist2 <= self.tol * self.tol)
        else:
            near = np.zeros(0, dtype=int)
        new = []
        for j in sorted(linked):
            if self.regions[j] != region:
                new.append((j, n, float(np.hypot(*(self.P[j] - p)))))
        for j in near:
            if self.regions[j] != region:
                new.append((int(j), n, 0.0))
        return n, new


def spanning_ratio_bound(theta: float) -> float:
    """Upper bound on the stretch of an obstacle-free Theta-graph."""
    s, c = math.sin(theta / 2), math.cos(theta / 2)
    return 1.0 + 2.0 * s / (c - s)


def build_theta(points, ds: DirectionSet, obstacles=None, regions=None, tol: float = 1e-9) -> ThetaGraph:
    """Theta-graph over ``points``; ``obstacles`` is a list of convex polygons."""
    pts = np.asarray(points, float).reshape(-1, 2)
    regions = np.arange(len(pts)) if regions is None else regions
    obs = ObstacleSet(obstacles or (), tol=tol)
    return ThetaGraph(pts, regions, ds, obs, tol)
