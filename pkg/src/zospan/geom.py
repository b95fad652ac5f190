"""Convex shape primitives: support points, clipping, distances, tangents, arcs.

Two concrete shapes are provided. :class:`PolygonShape` is a convex polygon
given counter-clockwise (1- and 2-vertex polygons are allowed as degenerate
point/segment regions). :class:`EllipseRectShape` is the intersection of a
convex quadratic region with an axis-aligned rectangle; this is the shape of a
free-space cell and also covers circles and ellipses.

Points are ``numpy`` arrays of shape ``(2,)``. All functions are pure.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

REL_ETA = 1e-9
_TINY = 1e-300


class GeometryError(ValueError):
    """Raised on invalid shapes or violated geometric preconditions."""


def as_point(p) -> np.ndarray:
    a = np.asarray(p, dtype=float).reshape(2)
    if not np.all(np.isfinite(a)):
        raise GeometryError(f"non-finite point {p!r}")
    return a


def unit(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    n = math.hypot(v[0], v[1])
    if n == 0.0:
        raise GeometryError("zero-length direction")
    return v / n


def direction(angle: float) -> np.ndarray:
    return np.array([math.cos(angle), math.sin(angle)])


def cross(u, v) -> float:
    return float(u[0] * v[1] - u[1] * v[0])


def orient(a, b, c) -> float:
    """Twice the signed area of triangle abc (positive when counter-clockwise)."""
    return float((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]))


def segment_point_distance(a, b, p) -> tuple[float, np.ndarray]:
    a = np.asarray(a, float)
    b = np.asarray(b, float)
    p = np.asarray(p, float)
    d = b - a
    dd = float(d @ d)
    t = 0.0 if dd == 0.0 else min(1.0, max(0.0, float((p - a) @ d) / dd))
    c = a + t * d
    return float(np.hypot(*(p - c))), c


def segment_segment_distance(a, b, c, d) -> tuple[float, np.ndarray, np.ndarray]:
    """Distance between segments ab and cd with a realizing pair of points."""
    a, b, c, d = (np.asarray(x, float) for x in (a, b, c, d))
    r, s = b - a, d - c
    denom = cross(r, s)
    if denom != 0.0:
        t = cross(c - a, s) / denom
        u = cross(c - a, r) / denom
        if 0.0 <= t <= 1.0 and 0.0 <= u <= 1.0:
            p = a + t * r
            return 0.0, p, p.copy()
    best = None
    for p, (e0, e1), first in ((a, (c, d), True), (b, (c, d), True),
                               (c, (a, b), False), (d, (a, b), False)):
        dist, q = segment_point_distance(e0, e1, p)
        if best is None or dist < best[0]:
            best = (dist, p, q) if first else (dist, q, p)
    return best[0], np.array(best[1]), np.array(best[2])


class ConvexShape:
    """Common contract of the concrete convex shapes."""

    kind = "abstract"

    # -- subclass hooks -------------------------------------------------
    def support(self, u) -> list[np.ndarray]:
        raise NotImplementedError

    def clip_segment(self, p, q, slack: float | None = None):
        """Parameter interval ``(t0, t1)`` of segment pq lying in the closed shape."""
        raise NotImplementedError

    def depth(self, p) -> float:
        """Positive inside, negative outside; magnitude approximates boundary distance."""
        raise NotImplementedError

    @property
    def bbox(self) -> tuple[float, float, float, float]:
        raise NotImplementedError

    # -- shared behaviour -----------------------------------------------
    def support_value(self, u) -> float:
        u = np.asarray(u, float)
        return float(self.support(u)[0] @ u)

    def support_values(self, U) -> np.ndarray:
        """Support function at each row of ``U``."""
        U = np.asarray(U, float).reshape(-1, 2)
        return np.array([self.support_value(u) for u in U])

    @cached_property
    def diameter(self) -> float:
        x0, y0, x1, y1 = self.bbox
        return math.hypot(x1 - x0, y1 - y0)

    @cached_property
    def eta(self) -> float:
        return REL_ETA * max(self.diameter, 1e-12)

    def contains(self, p, tol: float | None = None) -> bool:
        tol = self.eta if tol is None else tol
        return self.depth(p) >= -tol

    def strictly_contains(self, p, tol: float | None = None) -> bool:
        tol = self.eta if tol is None else tol
        return self.depth(p) > tol

    @cached_property
    def interior_point(self) -> np.ndarray:
        pts = [self.support(direction(i * math.pi / 4))[0] for i in range(8)]
        return np.mean(pts, axis=0)

    def on_boundary(self, p, tol: float | None = None) -> bool:
        tol = self.eta if tol is None else tol
        return abs(self.depth(p)) <= tol


# ---------------------------------------------------------------------------
# polygons


class PolygonShape(ConvexShape):
    """Convex polygon; vertices are stored counter-clockwise.

    ``strict=True`` rejects collinear vertices as well as reflex ones.
    """

    kind = "polygon"

    def __init__(self, vertices, *, strict: bool = False, check: bool = True):
        v = np.asarray(vertices, dtype=float).reshape(-1, 2)
        if not np.all(np.isfinite(v)):
            raise GeometryError("non-finite polygon vertex")
        if len(v) == 0:
            raise GeometryError("empty polygon")
        v = _drop_duplicates(v)
        if len(v) >= 3:
            if _signed_area(v) < 0:
                v = v[::-1].copy()
            if check:
                _check_convex(v, strict=strict)
        self.vertices = v
        self.n = len(v)
        if self.n >= 3:
            e = np.roll(v, -1, axis=0) - v
            lens = np.hypot(e[:, 0], e[:, 1])
            self._edges = e
            self._edge_len = lens
            self._normals = np.column_stack([e[:, 1], -e[:, 0]]) / lens[:, None]
            self._offsets = np.einsum("ij,ij->i", self._normals, v)
            self._cum = np.concatenate([[0.0], np.cumsum(lens)])

    # -- basic properties ---------------------------------------------
    @property
    def is_degenerate(self) -> bool:
        return self.n < 3

    @cached_property
    def bbox(self):
        v = self.vertices
        return (float(v[:, 0].min()), float(v[:, 1].min()),
                float(v[:, 0].max()), float(v[:, 1].max()))

    @cached_property
    def area(self) -> float:
        return abs(_signed_area(self.vertices)) if self.n >= 3 else 0.0

    @cached_property
    def perimeter(self) -> float:
        if self.n >= 3:
            return float(self._cum[-1])
        if self.n == 2:
            return 2.0 * float(np.hypot(*(self.vertices[1] - self.vertices[0])))
        return 0.0

    @cached_property
    def interior_point(self) -> np.ndarray:
        return self.vertices.mean(axis=0)

    def outline(self) -> np.ndarray:
        return self.vertices

    def edges(self):
        v = self.vertices
        if self.n == 1:
            return []
        if self.n == 2:
            return [(v[0], v[1])]
        return [(v[i], v[(i + 1) % self.n]) for i in range(self.n)]

    # -- support --------------------------------------------------------
    def support(self, u) -> list[np.ndarray]:
        u = np.asarray(u, float)
        d = self.vertices @ u
        mx = d.max()
        idx = np.flatnonzero(d >= mx - self.eta)
        if len(idx) == 1:
            return [self.vertices[idx[0]].copy()]
        perp = np.array([-u[1], u[0]])
        along = self.vertices[idx] @ perp
        lo, hi = idx[np.argmin(along)], idx[np.argmax(along)]
        if along.max() - along.min() <= self.eta:
            return [self.vertices[lo].copy()]
        # counter-clockwise order along the extreme edge
        return [self.vertices[lo].copy(), self.vertices[hi].copy()]

    def support_value(self, u) -> float:
        return float((self.vertices @ np.asarray(u, float)).max())

    def support_values(self, U) -> np.ndarray:
        U = np.asarray(U, float).reshape(-1, 2)
        return (U @ self.vertices.T).max(axis=1)

    # -- membership -----------------------------------------------------
    def depth(self, p) -> float:
        p = np.asarray(p, float)
        if self.n >= 3:
            s = self._offsets - self._normals @ p
            m = float(s.min())
            if m >= 0.0:
                return m
        return -self.distance_to(p)[0]

    def distance_to(self, p) -> tuple[float, np.ndarray]:
        """Distance from ``p`` to the boundary and the closest boundary point."""
        p = np.asarray(p, float)
        v = self.vertices
        if self.n == 1:
            return float(np.hypot(*(p - v[0]))), v[0].copy()
        a = v if self.n >= 3 else v[:1]
        b = np.roll(v, -1, axis=0) if self.n >= 3 else v[1:]
        d = b - a
        dd = np.einsum("ij,ij->i", d, d)
        t = np.clip(np.einsum("ij,ij->i", p - a, d) / np.maximum(dd, _TINY), 0.0, 1.0)
        c = a + t[:, None] * d
        dist = np.hypot(*(p - c).T)
        i = int(np.argmin(dist))
        return float(dist[i]), c[i]

    def clip_segment(self, p, q, slack: float | None = None):
        p = np.asarray(p, float)
        q = np.asarray(q, float)
        slack = self.eta if slack is None else slack
        d = q - p
        length = math.hypot(d[0], d[1])
        if self.n >= 3:
            num = self._offsets - self._normals @ p + slack
            den = self._normals @ d
            t0, t1 = 0.0, 1.0
            par = np.abs(den) <= 1e-15 * max(length, _TINY)
            if np.any(num[par] < 0.0):
                return None
            pos = den > 0
            neg = ~pos & ~par
            if np.any(pos):
                t1 = min(t1, float((num[pos] / den[pos]).min()))
            if np.any(neg):
                t0 = max(t0, float((num[neg] / den[neg]).max()))
            if t0 > t1:
                return None
            return t0, t1
        if length == 0.0:
            return (0.0, 0.0) if self.depth(p) >= -slack else None
        if self.n == 1:
            dist, c = segment_point_distance(p, q, self.vertices[0])
            if dist > slack:
                return None
            t = float((c - p) @ d) / (length * length)
            return t, t
        a, b = self.vertices
        dist, cp, _ = segment_segment_distance(p, q, a, b)
        if dist > slack:
            return None
        e = b - a
        if abs(cross(d, e)) <= 1e-12 * length * math.hypot(*e):
            ts = sorted(float((x - p) @ d) / (length * length) for x in (a, b))
            t0, t1 = max(0.0, ts[0]), min(1.0, ts[1])
            if t0 > t1:
                t = float((cp - p) @ d) / (length * length)
                return t, t
            return t0, t1
        t = float((cp - p) @ d) / (length * length)
        return t, t

    # -- boundary walking ------------------------------------------------
    def boundary_key(self, p) -> float:
        """Counter-clockwise arc-length coordinate of a boundary point."""
        p = np.asarray(p, float)
        if self.n < 3:
            if self.n == 1:
                return 0.0
            a, b = self.vertices
            return float(np.hypot(*(p - a)))
        v = self.vertices
        a, d = v, self._edges
        t = np.clip(np.einsum("ij,ij->i", p - a, d) / (self._edge_len ** 2), 0.0, 1.0)
        c = a + t[:, None] * d
        dist = np.hypot(*(p - c).T)
        i = int(np.argmin(dist))
        key = float(self._cum[i] + t[i] * self._edge_len[i])
        return key % self.perimeter

    def point_at_key(self, s: float) -> np.ndarray:
        if self.n < 3:
            return self.vertices[0].copy()
        s = s % self.perimeter
        i = int(np.searchsorted(self._cum, s, side="right") - 1)
        i = min(i, self.n - 1)
        t = (s - self._cum[i]) / self._edge_len[i]
        return self.vertices[i] + t * self._edges[i]

    def arc_ccw(self, a, b) -> np.ndarray:
        """Boundary polyline from ``a`` to ``b`` walking counter-clockwise."""
        a = np.asarray(a, float)
        b = np.asarray(b, float)
        if self.n < 3:
            return np.array([a, b])
        ka, kb = self.boundary_key(a), self.boundary_key(b)
        per = self.perimeter
        span = (kb - ka) % per
        if span <= self.eta:
            return np.array([a, b]) if np.hypot(*(a - b)) > 0 else np.array([a])
        pts = [a]
        for i in range(self.n):
            off = (self._cum[i] - ka) % per
            if self.eta < off < span - self.eta:
                pts.append((off, self.vertices[i]))
        inner = [v for _, v in sorted(pts[1:], key=lambda x: x[0])]
        return np.array([a, *inner, b])

    def to_dict(self) -> dict:
        return {"polygon": [[float(x), float(y)] for x, y in self.vertices]}

    def __repr__(self) -> str:
        return f"PolygonShape({self.vertices.tolist()!r})"


def _signed_area(v: np.ndarray) -> float:
    x, y = v[:, 0], v[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))


def _drop_duplicates(v: np.ndarray) -> np.ndarray:
    if len(v) < 2:
        return v
    scale = max(float(np.ptp(v[:, 0])), float(np.ptp(v[:, 1])), 1e-300)
    keep = [0]
    for i in range(1, len(v)):
        if np.hypot(*(v[i] - v[keep[-1]])) > 1e-12 * scale:
            keep.append(i)
    if len(keep) > 1 and np.hypot(*(v[keep[-1]] - v[keep[0]])) <= 1e-12 * scale:
        keep.pop()
    return v[keep].copy()


def _check_convex(v: np.ndarray, *, strict: bool) -> None:
    n = len(v)
    scale = max(float(np.ptp(v[:, 0])), float(np.ptp(v[:, 1])))
    tol = 1e-12 * scale * scale
    turns = []
    for i in range(n):
        turns.append(orient(v[i - 1], v[i], v[(i + 1) % n]))
    turns = np.array(turns)
    if np.any(turns < -tol):
        raise GeometryError("polygon is not convex")
    if strict and np.any(turns <= tol):
        raise GeometryError("polygon vertices are not in strictly convex position")
    # winding number one: the turning angles must add up to a single turn
    e = np.roll(v, -1, axis=0) - v
    ang = np.arctan2(e[:, 1], e[:, 0])
    total = float(np.sum((np.roll(ang, -1) - ang + math.pi) % (2 * math.pi) - math.pi))
    if abs(total - 2 * math.pi) > 1e-6:
        raise GeometryError("polygon is not simple")


# ---------------------------------------------------------------------------
# quadratic region clipped by a rectangle


class EllipseRectShape(ConvexShape):
    """``{z in rect : z^T M z + 2 b.z + c <= 0}`` with ``M`` positive semidefinite.

    With ``M`` positive definite this is an ellipse clipped by the rectangle.
    A singular ``M`` gives a slab, which is what a free-space cell becomes for
    two parallel segments. Use :meth:`from_ellipse` / :meth:`circle` for the
    common cases.
    """

    kind = "ellipse_rect"
    _ARC_REL_TOL = 1e-7

    def __init__(self, M, b, c, rect):
        M = np.asarray(M, float).reshape(2, 2)
        M = 0.5 * (M + M.T)
        b = np.asarray(b, float).reshape(2)
        xmin, xmax, ymin, ymax = (float(x) for x in rect)
        if not (xmin <= xmax and ymin <= ymax):
            raise GeometryError("invalid clip rectangle")
        w = np.linalg.eigvalsh(M)
        if w[0] < -1e-12 * max(abs(w[1]), 1e-300):
            raise GeometryError("quadratic form is not positive semidefinite")
        # normalise so the largest eigenvalue is one
        s = float(w[1]) if w[1] > 0 else 1.0
        self.M = M / s
        self.b = b / s
        self.c = float(c) / s
        self.rect = (xmin, xmax, ymin, ymax)
        self._corners = np.array([[xmin, ymin], [xmax, ymin], [xmax, ymax], [xmin, ymax]])
        eig = np.linalg.eigvalsh(self.M)
        self.definite = bool(eig[0] > 1e-12)
        self._empty = None
        if self.definite:
            self._Minv = np.linalg.inv(self.M)
            self._z0 = -self._Minv @ self.b
            self._r2 = float(self._z0 @ self.M @ self._z0) - self.c

    @classmethod
    def from_ellipse(cls, cx, cy, rx, ry, rot=0.0, xmin=None, xmax=None, ymin=None, ymax=None):
        if rx <= 0 or ry <= 0:
            raise GeometryError("ellipse axes must be positive")
        R = np.array([[math.cos(rot), -math.sin(rot)], [math.sin(rot), math.cos(rot)]])
        M = R @ np.diag([1.0 / rx ** 2, 1.0 / ry ** 2]) @ R.T
        c0 = np.array([cx, cy], float)
        big = 2.0 * max(rx, ry)
        rect = (cx - big if xmin is None else xmin, cx + big if xmax is None else xmax,
                cy - big if ymin is None else ymin, cy + big if ymax is None else ymax)
        shape = cls(M, -M @ c0, float(c0 @ M @ c0) - 1.0, rect)
        # keep the given parameters so files round-trip exactly
        shape._given = tuple(float(v) for v in (cx, cy, rx, ry, rot))
        return shape

    @classmethod
    def circle(cls, cx, cy, r):
        return cls.from_ellipse(cx, cy, r, r, 0.0)

    # -- quadratic helpers ----------------------------------------------
    def q(self, z) -> float:
        z = np.asarray(z, float)
        return float(z @ self.M @ z + 2.0 * self.b @ z + self.c)

    def _qgrad(self, z) -> np.ndarray:
        return 2.0 * (self.M @ np.asarray(z, float) + self.b)

    def _qdepth(self, z) -> float:
        val = self.q(z)
        g = float(np.hypot(*self._qgrad(z)))
        if g <= 1e-300:
            return math.inf if val <= 0 else -math.inf
        return -val / g

    def _rect_depth(self, z) -> float:
        xmin, xmax, ymin, ymax = self.rect
        return float(min(z[0] - xmin, xmax - z[0], z[1] - ymin, ymax - z[1]))

    def ellipse_params(self):
        """``(cx, cy, rx, ry, rot)`` when the quadratic form is definite."""
        if not self.definite:
            raise GeometryError("quadratic region is not an ellipse")
        c0 = -np.linalg.solve(self.M, self.b)
        r2 = float(c0 @ self.M @ c0) - self.c
        if r2 <= 0:
            raise GeometryError("empty ellipse")
        w, V = np.linalg.eigh(self.M / r2)
        rx, ry = 1.0 / math.sqrt(w[0]), 1.0 / math.sqrt(w[1])
        rot = math.atan2(V[1, 0], V[0, 0])
        return float(c0[0]), float(c0[1]), rx, ry, rot

    @property
    def bbox(self):
        return self._bbox

    @cached_property
    def _bbox(self):
        xs = [self.support_value(np.array([1.0, 0.0])), -self.support_value(np.array([-1.0, 0.0]))]
        ys = [self.support_value(np.array([0.0, 1.0])), -self.support_value(np.array([0.0, -1.0]))]
        return (xs[1], ys[1], xs[0], ys[0])

    # -- emptiness ------------------------------------------------------
    def min_q(self) -> tuple[float, np.ndarray]:
        """Minimum of the quadratic over the rectangle and a minimizer."""
        cands = [c for c in self._corners]
        if self.definite:
            z = -np.linalg.solve(self.M, self.b)
            if self._rect_depth(z) >= 0:
                cands.append(z)
        for i in range(4):
            e0, e1 = self._corners[i], self._corners[(i + 1) % 4]
            d = e1 - e0
            a = float(d @ self.M @ d)
            bb = float(d @ (self.M @ e0 + self.b))
            if a > 0:
                t = min(1.0, max(0.0, -bb / a))
                cands.append(e0 + t * d)
        vals = [self.q(z) for z in cands]
        i = int(np.argmin(vals))
        return vals[i], np.asarray(cands[i], float)

    def classify(self, rel_tol: float = 1e-12) -> str:
        """``'empty'``, ``'degenerate'`` (no interior) or ``'regular'``."""
        xmin, xmax, ymin, ymax = self.rect
        scale = max(xmax - xmin, ymax - ymin, 1e-300)
        # q is normalised to unit top eigenvalue, so it is measured in length^2
        tol = rel_tol * scale * scale
        m, _ = self.min_q()
        if m > tol:
            return "empty"
        if m >= -tol or xmax - xmin <= 1e-12 * scale or ymax - ymin <= 1e-12 * scale:
            return "degenerate"
        return "regular"

    def degenerate_set(self) -> np.ndarray:
        """Vertices (1 or 2 points) of a degenerate region."""
        m, z = self.min_q()
        xmin, xmax, ymin, ymax = self.rect
        if xmax - xmin <= 0 or ymax - ymin <= 0:
            # rectangle collapsed to a segment: clip it by the quadratic
            p, q = np.array([xmin, ymin]), np.array([xmax, ymax])
            iv = self._clip_quadratic(p, q, 0.0)
            if iv is None:
                return z[None, :]
            return np.array([p + iv[0] * (q - p), p + iv[1] * (q - p)])
        if self.definite:
            return z[None, :]
        w, V = np.linalg.eigh(self.M)
        line_dir = V[:, 0]
        L = 4.0 * math.hypot(xmax - xmin, ymax - ymin)
        p, q = z - L * line_dir, z + L * line_dir
        iv = _clip_rect(self.rect, p, q, 0.0)
        if iv is None:
            return z[None, :]
        a, b = p + iv[0] * (q - p), p + iv[1] * (q - p)
        if np.hypot(*(a - b)) <= 1e-12 * L:
            return a[None, :]
        return np.array([a, b])

    # -- support --------------------------------------------------------
    def support(self, u) -> list[np.ndarray]:
        u = np.asarray(u, float)
        tol_in = 1e-12 * max(self.rect[1] - self.rect[0], self.rect[3] - self.rect[2], 1e-300)
        if self.definite and self._r2 >= 0:
            Minv_u = self._Minv @ u
            pt = self._z0 + math.sqrt(self._r2) * Minv_u / math.sqrt(max(float(u @ Minv_u), 1e-300))
            if self._rect_depth(pt) >= -tol_in:
                return [pt]
        cands = [c for c in self._corners if self._qdepth(c) >= -tol_in]
        for i in range(4):
            e0, e1 = self._corners[i], self._corners[(i + 1) % 4]
            for t in _quad_roots_on_segment(self, e0, e1):
                cands.append(e0 + t * (e1 - e0))
        if not cands:
            raise GeometryError("support of an empty shape")
        cands = np.array(cands)
        d = cands @ u
        mx = d.max()
        idx = np.flatnonzero(d >= mx - REL_ETA * max(self.rect[1] - self.rect[0],
                                                    self.rect[3] - self.rect[2], 1e-12))
        if len(idx) == 1:
            return [cands[idx[0]].copy()]
        perp = np.array([-u[1], u[0]])
        along = cands[idx] @ perp
        lo, hi = idx[np.argmin(along)], idx[np.argmax(along)]
        if along.max() - along.min() <= tol_in * 1e3:
            return [cands[lo].copy()]
        return [cands[lo].copy(), cands[hi].copy()]

    def support_values(self, U) -> np.ndarray:
        U = np.asarray(U, float).reshape(-1, 2)
        out = np.full(len(U), np.nan)
        if self.definite and self._r2 >= 0:
            MU = U @ self._Minv
            den = np.sqrt(np.maximum(np.einsum("ij,ij->i", MU, U), 1e-300))
            P = self._z0 + math.sqrt(self._r2) * MU / den[:, None]
            xmin, xmax, ymin, ymax = self.rect
            tol_in = 1e-12 * max(xmax - xmin, ymax - ymin, 1e-300)
            ok = ((P[:, 0] >= xmin - tol_in) & (P[:, 0] <= xmax + tol_in)
                  & (P[:, 1] >= ymin - tol_in) & (P[:, 1] <= ymax + tol_in))
            out[ok] = np.einsum("ij,ij->i", P[ok], U[ok])
        for i in np.flatnonzero(np.isnan(out)):
            out[i] = self.support_value(U[i])
        return out

    # -- membership -----------------------------------------------------
    def depth(self, p) -> float:
        p = np.asarray(p, float)
        return min(self._rect_depth(p), self._qdepth(p))

    def _clip_quadratic(self, p, q, slack):
        d = q - p
        length = math.hypot(*d)
        a = float(d @ self.M @ d)
        bq = float(d @ (self.M @ p + self.b))
        cq = self.q(p)
        widen = slack / max(length, 1e-300)
        if a <= 1e-14 * max(length * length, 1e-300):
            if abs(bq) <= 1e-300:
                return (0.0, 1.0) if cq <= 0 else None
            t = -cq / (2.0 * bq)
            if bq > 0:
                return (-math.inf, t + widen)
            return (t - widen, math.inf)
        disc = bq * bq - a * cq
        if disc < 0:
            return None
        r = math.sqrt(disc)
        t0 = (-bq - r) / a
        t1 = (-bq + r) / a
        return (t0 - widen, t1 + widen)

    def clip_segment(self, p, q, slack: float | None = None):
        p = np.asarray(p, float)
        q = np.asarray(q, float)
        slack = self.eta if slack is None else slack
        iv = _clip_rect(self.rect, p, q, slack)
        if iv is None:
            return None
        if math.hypot(*(q - p)) == 0.0:
            return (0.0, 0.0) if self.depth(p) >= -slack else None
        jv = self._clip_quadratic(p, q, slack)
        if jv is None:
            return None
        t0, t1 = max(iv[0], jv[0]), min(iv[1], jv[1])
        if t0 > t1:
            return None
        return t0, t1

    # -- boundary -------------------------------------------------------
    def boundary_point(self, angle: float) -> np.ndarray:
        c = self.interior_point
        u = direction(angle)
        L = 2.0 * self.diameter + 1e-300
        iv = self.clip_segment(c, c + L * u, slack=0.0)
        if iv is None:
            return c.copy()
        return c + iv[1] * L * u

    def boundary_key(self, p) -> float:
        c = self.interior_point
        return math.atan2(p[1] - c[1], p[0] - c[0]) % (2 * math.pi)

    def _sample_angles(self, a0: float, a1: float, tol: float) -> list[np.ndarray]:
        """Boundary points for angles in [a0, a1] (a1 >= a0), adaptively refined."""
        n0 = max(2, int(math.ceil((a1 - a0) / (2 * math.pi) * 64)))
        angs = np.linspace(a0, a1, n0 + 1)
        pts = [self.boundary_point(a) for a in angs]
        out = [pts[0]]
        stack = []
        for i in range(n0):
            stack.append((angs[i], angs[i + 1], pts[i], pts[i + 1], 0))
            seg = []
            while stack:
                lo, hi, plo, phi, depth = stack.pop()
                mid = 0.5 * (lo + hi)
                pm = self.boundary_point(mid)
                sag, _ = segment_point_distance(plo, phi, pm)
                if sag > tol and depth < 40:
                    stack.append((mid, hi, pm, phi, depth + 1))
                    stack.append((lo, mid, plo, pm, depth + 1))
                else:
                    seg.append(phi)
            out.extend(seg)
        return out

    @cached_property
    def _outline(self) -> np.ndarray:
        pts = self._sample_angles(0.0, 2 * math.pi, self._ARC_REL_TOL * self.diameter)
        pts = np.array(pts[:-1])
        return _drop_duplicates(pts)

    def outline(self) -> np.ndarray:
        return self._outline

    @cached_property
    def perimeter(self) -> float:
        v = self._outline
        return float(np.sum(np.hypot(*(np.roll(v, -1, axis=0) - v).T)))

    @cached_property
    def area(self) -> float:
        return abs(_signed_area(self._outline))

    def arc_ccw(self, a, b) -> np.ndarray:
        a = np.asarray(a, float)
        b = np.asarray(b, float)
        ka, kb = self.boundary_key(a), self.boundary_key(b)
        if kb < ka:
            kb += 2 * math.pi
        if kb - ka <= 1e-15:
            return np.array([a, b]) if np.hypot(*(a - b)) > 0 else np.array([a])
        pts = self._sample_angles(ka, kb, self._ARC_REL_TOL * self.diameter)
        pts[0], pts[-1] = a, b
        return np.array(pts)

    def to_dict(self) -> dict:
        xmin, xmax, ymin, ymax = self.rect
        if self.definite:
            cx, cy, rx, ry, rot = getattr(self, "_given", None) or self.ellipse_params()
            return {"ellipse_rect": {"cx": cx, "cy": cy, "rx": rx, "ry": ry, "rot": rot,
                                     "xmin": xmin, "xmax": xmax, "ymin": ymin, "ymax": ymax}}
        return {"quad_rect": {"M": self.M.tolist(), "b": self.b.tolist(), "c": self.c,
                              "xmin": xmin, "xmax": xmax, "ymin": ymin, "ymax": ymax}}

    def __repr__(self) -> str:
        return f"EllipseRectShape(rect={self.rect!r})"


def _clip_rect(rect, p, q, slack):
    xmin, xmax, ymin, ymax = rect
    d = q - p
    t0, t1 = 0.0, 1.0
    for dd, lo, hi, pp in ((d[0], xmin, xmax, p[0]), (d[1], ymin, ymax, p[1])):
        lo -= slack
        hi += slack
        if dd == 0.0:
            if pp < lo or pp > hi:
                return None
            continue
        a, b = (lo - pp) / dd, (hi - pp) / dd
        if a > b:
            a, b = b, a
        t0, t1 = max(t0, a), min(t1, b)
        if t0 > t1:
            return None
    return t0, t1


def _quad_roots_on_segment(shape: EllipseRectShape, e0, e1) -> list[float]:
    d = e1 - e0
    a = float(d @ shape.M @ d)
    bq = float(d @ (shape.M @ e0 + shape.b))
    cq = shape.q(e0)
    out = []
    if a <= 1e-14 * float(d @ d):
        if abs(bq) > 1e-300:
            out.append(-cq / (2 * bq))
    else:
        disc = bq * bq - a * cq
        if disc >= 0:
            r = math.sqrt(disc)
            out.extend([(-bq - r) / a, (-bq + r) / a])
    return [t for t in out if 0.0 <= t <= 1.0]


# ---------------------------------------------------------------------------
# operations on shapes


def support_point(shape: ConvexShape, u) -> list[np.ndarray]:
    """Extreme boundary point(s) of ``shape`` in direction ``u``.

    Returns both endpoints when a whole edge is extreme.
    """
    return shape.support(unit(u))


def ray_intersect(origin, u, shape: ConvexShape):
    """First point where the ray hits ``shape`` as ``(point, param)``, or ``None``.

    Grazing contacts within the shape tolerance count as hits.
    """
    origin = as_point(origin)
    u = unit(u)
    c = shape.interior_point
    L = float(np.hypot(*(origin - c))) + 2.0 * shape.diameter + 1.0
    iv = shape.clip_segment(origin, origin + L * u, slack=0.0)
    if iv is None:
        # grazing contact within tolerance still counts
        iv = shape.clip_segment(origin, origin + L * u)
        if iv is None:
            return None
    t = max(iv[0], 0.0) * L
    return origin + t * u, t


@dataclass(frozen=True)
class TangentPair:
    point_on_A: np.ndarray
    point_on_B: np.ndarray
    kind: str  # "outer" or "inner"


def _gjk(sa, sb, d0, tol, max_iter=1000):
    """Distance between two convex sets given by support maps (2D GJK)."""
    d0 = np.asarray(d0, float)
    if not np.any(d0):
        d0 = np.array([1.0, 0.0])
    a, b = sa(-d0), sb(d0)
    simplex = [(a - b, a, b)]
    v = a - b
    for _ in range(max_iter):
        vn = float(np.hypot(*v))
        if vn <= tol:
            return 0.0, simplex
        a, b = sa(-v), sb(v)
        w = a - b
        if vn - float(v @ w) / vn <= tol:
            break
        if any(np.array_equal(w, s[0]) for s in simplex):
            break
        simplex.append((w, a, b))
        v, simplex = _closest_on_simplex(simplex)
    return float(np.hypot(*v)), simplex


def _closest_on_simplex(simplex):
    pts = [s[0] for s in simplex]
    if len(pts) == 1:
        return pts[0], simplex
    if len(pts) == 2:
        w0, w1 = pts
        d = w1 - w0
        dd = float(d @ d)
        t = 0.0 if dd == 0 else min(1.0, max(0.0, -float(w0 @ d) / dd))
        if t <= 0.0:
            return w0, [simplex[0]]
        if t >= 1.0:
            return w1, [simplex[1]]
        return w0 + t * d, simplex
    w0, w1, w2 = pts
    s0, s1, s2 = orient(w0, w1, w2), orient(w0, w1, np.zeros(2)), 0
    o = np.zeros(2)
    areas = (orient(o, w1, w2), orient(w0, o, w2), orient(w0, w1, o))
    if s0 != 0 and all(x * s0 >= 0 for x in areas):
        return np.zeros(2), simplex
    best = None
    for i, j in ((0, 1), (1, 2), (0, 2)):
        v, sub = _closest_on_simplex([simplex[i], simplex[j]])
        n = float(v @ v)
        if best is None or n < best[0]:
            best = (n, v, sub)
    return best[1], best[2]


def _barycentric_points(simplex, v):
    if len(simplex) == 1:
        return simplex[0][1], simplex[0][2]
    (w0, a0, b0), (w1, a1, b1) = simplex[0], simplex[1]
    d = w1 - w0
    dd = float(d @ d)
    t = 0.0 if dd == 0 else min(1.0, max(0.0, -float(w0 @ d) / dd))
    return a0 + t * (a1 - a0), b0 + t * (b1 - b0)


def _support_map(shape):
    return lambda u: shape.support(u)[0]


def overlap_depth(A: ConvexShape, B: ConvexShape, n_dirs: int = 720) -> float:
    """Smallest overlap of the projections of A and B over all directions.

    Positive means the interiors intersect; it is exact for polygons.
    """
    dirs = []
    for S in (A, B):
        if isinstance(S, PolygonShape) and S.n >= 3:
            dirs.extend(S._normals)
        elif isinstance(S, PolygonShape) and S.n == 2:
            e = unit(S.vertices[1] - S.vertices[0])
            dirs.extend([np.array([e[1], -e[0]]), np.array([-e[1], e[0]])])
    poly = all(isinstance(S, PolygonShape) for S in (A, B))
    if not poly or not dirs:
        dirs.extend(direction(2 * math.pi * i / n_dirs) for i in range(n_dirs))
    if isinstance(A, PolygonShape) and isinstance(B, PolygonShape) and A.n <= 2 and B.n <= 2:
        # two segments/points have no interior; treat a proper crossing as overlap
        dirs.extend(direction(2 * math.pi * i / n_dirs) for i in range(n_dirs))
    best = math.inf
    for u in dirs:
        val = A.support_value(u) + B.support_value(-u)
        best = min(best, val)
    return best


def shape_distance(A: ConvexShape, B: ConvexShape, *, method: str = "gjk", check: bool = True):
    """Minimum distance between two interior-disjoint convex shapes.

    Returns ``(dist, p, q)`` with ``p`` on A and ``q`` on B. ``method="exact"``
    uses all edge pairs (polygons only) and serves as a cross-check.
    """
    tol = REL_ETA * max(A.diameter, B.diameter, 1e-12)
    if method == "exact":
        if not (isinstance(A, PolygonShape) and isinstance(B, PolygonShape)):
            raise GeometryError("exact distance needs polygons")
        return _polygon_distance_exact(A, B, check=check, tol=tol)
    d0 = B.interior_point - A.interior_point
    dist, simplex = _gjk(_support_map(A), _support_map(B), -d0, tol)
    if dist <= tol:
        if check and overlap_depth(A, B) > 10 * tol:
            raise GeometryError("shapes overlap")
        p, q = _touch_points(A, B)
        return 0.0, p, q
    p, q = _barycentric_points(simplex, None)
    return float(np.hypot(*(p - q))), p, q


def _touch_points(A, B):
    # a common point of two touching shapes
    if isinstance(A, PolygonShape) and isinstance(B, PolygonShape):
        _, p, q = _polygon_distance_exact(A, B, check=False, tol=0.0)
        return p, q
    best = None
    for u in (direction(2 * math.pi * i / 64) for i in range(64)):
        p = A.support(u)[0]
        dist = -B.depth(p)
        if best is None or dist < best[0]:
            best = (dist, p)
    return best[1], best[1].copy()


def _polygon_distance_exact(A: PolygonShape, B: PolygonShape, *, check=True, tol=0.0):
    if check and overlap_depth(A, B) > 10 * max(tol, 1e-300):
        raise GeometryError("shapes overlap")
    ea = A.edges() or [(A.vertices[0], A.vertices[0])]
    eb = B.edges() or [(B.vertices[0], B.vertices[0])]
    best = None
    for a0, a1 in ea:
        for b0, b1 in eb:
            d, p, q = segment_segment_distance(a0, a1, b0, b1)
            if best is None or d < best[0]:
                best = (d, p, q)
    # a vertex of one polygon inside the other means contact
    return best


def point_shape_distance(p, A: ConvexShape):
    """``(dist, q)``: distance from ``p`` to ``A`` (0 inside) and closest point on ∂A."""
    p = as_point(p)
    if isinstance(A, PolygonShape):
        d, q = A.distance_to(p)
        if A.n >= 3 and A.depth(p) >= 0:
            return 0.0, q
        return d, q
    if A.contains(p, tol=0.0):
        return 0.0, p.copy()
    dist, simplex = _gjk(lambda u: p, _support_map(A), A.interior_point - p, A.eta)
    _, q = _barycentric_points(simplex, None)
    return float(np.hypot(*(p - q))), q


def _angle_roots(f, n: int = 2048, iters: int = 50, fv=None) -> list[float]:
    """Sign changes of ``f`` on [0, 2pi), refined by bisection.

    ``fv`` optionally evaluates ``f`` on an array of angles at once; all
    brackets are then refined together.
    """
    if fv is None:
        def fv(a):
            return np.array([f(x) for x in np.atleast_1d(a)])
    step = 2 * math.pi / n
    angs = np.arange(n) * step
    vals = fv(angs)
    nxt = np.roll(vals, -1)
    exact = angs[vals == 0.0]
    br = np.flatnonzero((vals != 0.0) & (vals * nxt < 0))
    lo, hi, vlo = angs[br], angs[br] + step, vals[br]
    for _ in range(iters):
        if not len(lo):
            break
        mid = 0.5 * (lo + hi)
        vm = fv(mid)
        left = (vm < 0) == (vlo < 0)
        lo = np.where(left, mid, lo)
        vlo = np.where(left, vm, vlo)
        hi = np.where(left, hi, mid)
    roots = list(exact) + list((0.5 * (lo + hi)) % (2 * math.pi))
    return sorted(float(r) for r in roots)


def common_tangents(A: ConvexShape, B: ConvexShape) -> list[TangentPair]:
    """Common tangent lines of two disjoint convex shapes (at most four).

    Outer tangents leave both shapes on the same side; inner tangents separate
    them and only exist when the shapes are strictly apart.
    """
    tol = REL_ETA * max(A.diameter, B.diameter, 1e-12)
    dist, _, _ = shape_distance(A, B)
    if isinstance(A, PolygonShape) and isinstance(B, PolygonShape):
        out = _polygon_common_tangents(A, B, tol)
    else:
        out = []

        def dirs(a):
            return np.column_stack([np.cos(a), np.sin(a)])

        for kind, f, fv, sb in (
            ("outer", lambda a: A.support_value(direction(a)) - B.support_value(direction(a)),
             lambda a: A.support_values(dirs(a)) - B.support_values(dirs(a)), 1.0),
            ("inner", lambda a: A.support_value(direction(a)) + B.support_value(-direction(a)),
             lambda a: A.support_values(dirs(a)) + B.support_values(-dirs(a)), -1.0),
        ):
            for ang in _angle_roots(f, fv=fv):
                u = direction(ang)
                out.append(TangentPair(A.support(u)[0], B.support(sb * u)[0], kind))
    if dist <= 10 * tol:
        out = [t for t in out if t.kind == "outer"]
    return _dedupe_tangents(out, tol)


def _polygon_common_tangents(A: PolygonShape, B: PolygonShape, tol) -> list[TangentPair]:
    VA, VB = A.vertices, B.vertices
    out = []
    for a in VA:
        for b in VB:
            d = b - a
            n = math.hypot(*d)
            if n <= tol:
                continue
            sa = (d[0] * (VA[:, 1] - a[1]) - d[1] * (VA[:, 0] - a[0])) / n
            sb = (d[0] * (VB[:, 1] - a[1]) - d[1] * (VB[:, 0] - a[0])) / n
            a_left, a_right = np.all(sa >= -tol), np.all(sa <= tol)
            b_left, b_right = np.all(sb >= -tol), np.all(sb <= tol)
            if (a_left and b_left) or (a_right and b_right):
                out.append(TangentPair(a.copy(), b.copy(), "outer"))
            elif (a_left and b_right) or (a_right and b_left):
                out.append(TangentPair(a.copy(), b.copy(), "inner"))
    return out


def _dedupe_tangents(tangents, tol) -> list[TangentPair]:
    # several vertex pairs describe one line when an edge lies on it; keep the
    # pair whose connecting segment is shortest
    groups: list[list[TangentPair]] = []
    for t in tangents:
        d = unit(t.point_on_B - t.point_on_A) if np.hypot(*(t.point_on_B - t.point_on_A)) > 0 else np.array([1.0, 0])
        placed = False
        for g in groups:
            g0 = g[0]
            d0 = g0.point_on_B - g0.point_on_A
            n0 = math.hypot(*d0)
            if g0.kind != t.kind or n0 == 0:
                continue
            on_line = all(abs(cross(d0, x - g0.point_on_A)) / n0 <= 1e3 * tol
                          for x in (t.point_on_A, t.point_on_B))
            if on_line:
                g.append(t)
                placed = True
                break
        if not placed:
            groups.append([t])
    return [min(g, key=lambda t: float(np.hypot(*(t.point_on_B - t.point_on_A)))) for g in groups]


def point_tangents(p, A: ConvexShape) -> list[np.ndarray]:
    """Touch points on ∂A of the two tangent lines through an outside point ``p``.

    For ``p`` on the boundary of a polygon the neighbouring vertices along the
    two incident edges are returned.
    """
    p = as_point(p)
    if isinstance(A, PolygonShape) and A.n >= 3:
        V = A.vertices
        depth = A.depth(p)
        if depth > A.eta:
            raise GeometryError("point lies inside the shape")
        if depth >= -A.eta:
            key = A.boundary_key(p)
            per = A.perimeter
            offs = [((A._cum[i] - key) % per, i) for i in range(A.n)]
            nxt = min((o, i) for o, i in offs if o > A.eta)[1]
            prv = max((o, i) for o, i in offs if o < per - A.eta)[1]
            return [V[nxt].copy(), V[prv].copy()]
        res = []
        for i in range(A.n):
            d = V[i] - p
            n = math.hypot(*d)
            s = (d[0] * (V[:, 1] - p[1]) - d[1] * (V[:, 0] - p[0])) / n
            if np.all(s >= -A.eta) or np.all(s <= A.eta):
                res.append((n, i, bool(np.all(s >= -A.eta))))
        # one touch point per side, the nearer one when an edge is collinear with p
        out = []
        for side in (True, False):
            cand = [r for r in res if r[2] == side]
            if cand:
                out.append(V[min(cand)[1]].copy())
        return out
    if A.depth(p) > A.eta:
        raise GeometryError("point lies inside the shape")
    roots = _angle_roots(lambda a: A.support_value(direction(a)) - float(direction(a) @ p),
                         fv=lambda a: A.support_values(np.column_stack([np.cos(a), np.sin(a)]))
                         - (np.cos(a) * p[0] + np.sin(a) * p[1]))
    return [A.support(direction(a))[0] for a in roots]


def boundary_arc(A: ConvexShape, a, b, orientation: str = "ccw"):
    """Boundary polyline from ``a`` to ``b`` and its length."""
    a = as_point(a)
    b = as_point(b)
    tol = max(A.eta * 1e3, 1e-12)
    for x in (a, b):
        if not A.on_boundary(x, tol=tol):
            raise GeometryError("arc endpoint is not on the boundary")
    if orientation == "ccw":
        pts = A.arc_ccw(a, b)
    elif orientation == "cw":
        pts = A.arc_ccw(b, a)[::-1]
    else:
        raise ValueError(f"orientation must be 'ccw' or 'cw', got {orientation!r}")
    if len(pts) < 2:
        return pts, 0.0
    return pts, float(np.sum(np.hypot(*np.diff(pts, axis=0).T)))


def polyline_length(pts) -> float:
    pts = np.asarray(pts, float)
    if len(pts) < 2:
        return 0.0
    return float(np.sum(np.hypot(*np.diff(pts, axis=0).T)))


def shorter_arc(A: ConvexShape, a, b):
    """The shorter of the two boundary arcs between ``a`` and ``b``."""
    p1 = A.arc_ccw(a, b)
    p2 = A.arc_ccw(b, a)[::-1]
    l1, l2 = polyline_length(p1), polyline_length(p2)
    return (p1, l1) if l1 <= l2 else (p2, l2)


def segment_hits_interior(p, q, shape: ConvexShape, tol: float) -> bool:
    """True when segment pq passes through the interior of ``shape`` deeper than ``tol``."""
    iv = shape.clip_segment(p, q, slack=0.0)
    if iv is None:
        return False
    t0, t1 = iv
    p = np.asarray(p, float)
    q = np.asarray(q, float)
    L = math.hypot(*(q - p))
    if (t1 - t0) * L <= tol:
        return False
    mid = p + 0.5 * (t0 + t1) * (q - p)
    return shape.depth(mid) > tol


# ---------------------------------------------------------------------------
# seams between touching obstacles


def flat_edges(shape: ConvexShape) -> list[tuple[np.ndarray, np.ndarray]]:
    """Straight boundary pieces, counter-clockwise (the interior on their left)."""
    if isinstance(shape, PolygonShape):
        return [(a.copy(), b.copy()) for a, b in shape.edges()]
    out = []
    if isinstance(shape, EllipseRectShape):
        c = shape._corners
        for i in range(4):
            a, b = c[i], c[(i + 1) % 4]
            iv = shape._clip_quadratic(a, b, 0.0)
            if iv is not None and iv[1] > iv[0]:
                out.append((a + iv[0] * (b - a), a + iv[1] * (b - a)))
    return out


def find_seams(shapes, tol: float) -> list[tuple[np.ndarray, np.ndarray]]:
    """Segments of positive length where two of ``shapes`` touch along a shared edge."""
    edges = [flat_edges(s) for s in shapes]
    seams = []
    for i in range(len(shapes)):
        for j in range(i + 1, len(shapes)):
            bi, bj = shapes[i].bbox, shapes[j].bbox
            if min(bi[2], bj[2]) < max(bi[0], bj[0]) - tol or min(bi[3], bj[3]) < max(bi[1], bj[1]) - tol:
                continue
            for a, b in edges[i]:
                d = b - a
                L = math.hypot(*d)
                if L <= tol:
                    continue
                u = d / L
                for c, e in edges[j]:
                    # touching edges are collinear and run in opposite directions
                    if abs(cross(u, c - a)) > tol or abs(cross(u, e - a)) > tol or (e - c) @ u >= 0:
                        continue
                    lo = max(0.0, min((c - a) @ u, (e - a) @ u))
                    hi = min(L, max((c - a) @ u, (e - a) @ u))
                    if hi - lo > tol:
                        seams.append((a + lo * u, a + hi * u))
    return seams


def runs_along_seam(p, q, seams, tol: float) -> bool:
    """Does segment pq share a piece of positive length with one of ``seams``?"""
    p = np.asarray(p, float)
    q = np.asarray(q, float)
    for a, b in seams:
        d = b - a
        L = math.hypot(*d)
        u = d / L
        if abs(cross(u, p - a)) > tol or abs(cross(u, q - a)) > tol:
            continue
        lo = max(0.0, min((p - a) @ u, (q - a) @ u))
        hi = min(L, max((p - a) @ u, (q - a) @ u))
        if hi - lo > tol:
            return True
    return False
