"""Reference computations used to check the engine.

All solvers here are deliberately simple: they trade speed for obviously
correct constructions and share only the shape primitives with the engine.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import dijkstra as sp_dijkstra

from .geom import (EllipseRectShape, PolygonShape, common_tangents, point_shape_distance,
                   polyline_length, shape_distance, GeometryError)
from .sampling import DirectionSet, original_sample_points, simplify
from .scene import Scene

EXACT = "complete-graph-exact"
DENSE = "dense-visibility"
GRID = "grid-dijkstra"
NAIVE = "naive-scan"


@dataclass
class OracleReport:
    value: float
    method: str
    error_bound: float
    witness: np.ndarray = field(repr=False, default=None)
    info: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"value": self.value, "method": self.method, "error_bound": self.error_bound,
                "witness": [] if self.witness is None else self.witness.tolist(), **self.info}


def _pt(p) -> np.ndarray:
    return np.asarray(p, float).reshape(2)


def _shortest(n, rows, cols, w, src, dst):
    """Dijkstra via scipy; keeps the lightest of parallel edges."""
    rows = np.asarray(rows, np.int64)
    cols = np.asarray(cols, np.int64)
    w = np.asarray(w, float)
    order = np.argsort(w, kind="stable")
    lo = np.minimum(rows, cols)[order]
    hi = np.maximum(rows, cols)[order]
    _, first = np.unique(lo * n + hi, return_index=True)
    lo, hi, w = lo[first], hi[first], w[order][first]
    # csgraph drops explicit zeros, so nudge them to the smallest positive value
    g = coo_matrix((np.where(w <= 0.0, np.finfo(float).tiny, w), (lo, hi)), shape=(n, n)).tocsr()
    dist, pred = sp_dijkstra(g, directed=False, indices=src, return_predecessors=True)
    if not np.isfinite(dist[dst]):
        return math.inf, []
    path = [dst]
    while path[-1] != src:
        path.append(int(pred[path[-1]]))
    path = path[::-1]
    # re-sum the true weights so zero edges contribute exactly zero
    key = dict(zip((lo * n + hi).tolist(), w.tolist()))
    total = math.fsum(key[min(a, b) * n + max(a, b)] for a, b in zip(path, path[1:]))
    return total, path


# ---------------------------------------------------------------------------
# exact solver for 0-regions only


def exact_zero_region_sp(scene: Scene, s, t) -> OracleReport:
    """Exact optimum over the complete graph on regions plus s and t."""
    if scene.has_obstacles:
        raise ValueError("the exact solver handles 0-regions only")
    s, t = _pt(s), _pt(t)
    regs = scene.zero_regions
    n = len(regs) + 2
    rows, cols, w, geo = [0], [1], [math.hypot(*(s - t))], {(0, 1): (s, t)}
    for i, r in enumerate(regs):
        for j, z in ((0, s), (1, t)):
            d, q = point_shape_distance(z, r.shape)
            rows.append(j)
            cols.append(i + 2)
            w.append(d)
            geo[(j, i + 2)] = (z, q if d > 0 else z)
        for k in range(i + 1, len(regs)):
            d, p, q = shape_distance(r.shape, regs[k].shape, check=False)
            rows.append(i + 2)
            cols.append(k + 2)
            w.append(d)
            geo[(i + 2, k + 2)] = (p, q)
    value, path = _shortest(n, rows, cols, w, 0, 1)
    pts = [s]
    for a, b in zip(path, path[1:]):
        p, q = geo[(a, b)] if (a, b) in geo else geo[(b, a)][::-1]
        pts.extend([p, q])
    return OracleReport(value, EXACT, 0.0, np.array(pts))


# ---------------------------------------------------------------------------
# vectorized clipping of many segments against one shape


def _clip_many(shape, P, D):
    """Parameter intervals ``(t0, t1)`` of segments ``P + t D`` inside ``shape``.

    Empty intervals have ``t0 > t1``.
    """
    m = len(P)
    t0 = np.zeros(m)
    t1 = np.ones(m)

    def halfplanes(nrm, off):
        nonlocal t0, t1
        for (nx, ny), o in zip(nrm, off):
            num = o - (nx * P[:, 0] + ny * P[:, 1])
            den = nx * D[:, 0] + ny * D[:, 1]
            par = np.abs(den) <= 1e-300
            with np.errstate(divide="ignore", invalid="ignore"):
                r = num / den
            t1 = np.where(~par & (den > 0), np.minimum(t1, r), t1)
            t0 = np.where(~par & (den < 0), np.maximum(t0, r), t0)
            t0 = np.where(par & (num < 0), 2.0, t0)

    if isinstance(shape, PolygonShape):
        v = shape.vertices
        e = np.roll(v, -1, axis=0) - v
        nrm = np.column_stack([e[:, 1], -e[:, 0]])
        nrm /= np.hypot(nrm[:, 0], nrm[:, 1])[:, None]
        halfplanes(nrm, np.einsum("ij,ij->i", nrm, v))
        return t0, t1
    x0, x1, y0, y1 = shape.rect
    halfplanes(np.array([[1.0, 0], [-1.0, 0], [0, 1.0], [0, -1.0]]), np.array([x1, -x0, y1, -y0]))
    M, b, c = shape.M, shape.b, shape.c
    MD = D @ M
    a2 = np.einsum("ij,ij->i", MD, D)
    # q(z) = z.M.z + 2 b.z + c along z = P + t D
    a1 = 2 * np.einsum("ij,ij->i", P @ M, D) + 2 * (D @ b)
    a0 = np.einsum("ij,ij->i", P @ M, P) + 2 * (P @ b) + c
    lin = a2 <= 1e-14 * np.maximum(np.einsum("ij,ij->i", D, D), 1e-300)
    disc = a1 * a1 - 4 * a2 * a0
    with np.errstate(divide="ignore", invalid="ignore"):
        sq = np.sqrt(np.maximum(disc, 0.0))
        r0 = (-a1 - sq) / (2 * a2)
        r1 = (-a1 + sq) / (2 * a2)
        rl = -a0 / a1
    q0 = np.where(lin, np.where(a1 < 0, rl, np.where(a1 > 0, -np.inf, np.where(a0 <= 0, -np.inf, 2.0))), r0)
    q1 = np.where(lin, np.where(a1 > 0, rl, np.where(a1 < 0, np.inf, np.where(a0 <= 0, np.inf, -2.0))), r1)
    q0 = np.where(~lin & (disc < 0), 2.0, q0)
    q1 = np.where(~lin & (disc < 0), -2.0, q1)
    return np.maximum(t0, q0), np.minimum(t1, q1)


def _depth_many(shape, X):
    if isinstance(shape, PolygonShape):
        v = shape.vertices
        e = np.roll(v, -1, axis=0) - v
        nrm = np.column_stack([e[:, 1], -e[:, 0]])
        nrm /= np.hypot(nrm[:, 0], nrm[:, 1])[:, None]
        off = np.einsum("ij,ij->i", nrm, v)
        return np.min(off[None, :] - X @ nrm.T, axis=1)
    x0, x1, y0, y1 = shape.rect
    rd = np.minimum.reduce([X[:, 0] - x0, x1 - X[:, 0], X[:, 1] - y0, y1 - X[:, 1]])
    q = np.einsum("ij,ij->i", X @ shape.M, X) + 2 * (X @ shape.b) + shape.c
    g = 2 * (X @ shape.M + shape.b)
    qd = -q / np.maximum(np.hypot(g[:, 0], g[:, 1]), 1e-300)
    return np.minimum(rd, qd)


def _blocked_many(obstacles, P, Q, tol):
    D = Q - P
    L = np.hypot(D[:, 0], D[:, 1])
    out = np.zeros(len(P), bool)
    for sh in obstacles:
        x0, y0, x1, y1 = sh.bbox
        cand = ~(((P[:, 0] < x0) & (Q[:, 0] < x0)) | ((P[:, 0] > x1) & (Q[:, 0] > x1))
                 | ((P[:, 1] < y0) & (Q[:, 1] < y0)) | ((P[:, 1] > y1) & (Q[:, 1] > y1))) & ~out
        idx = np.flatnonzero(cand)
        if not len(idx):
            continue
        t0, t1 = _clip_many(sh, P[idx], D[idx])
        hit = (t1 - t0) * L[idx] > tol
        mid = P[idx] + (0.5 * (t0 + t1))[:, None] * D[idx]
        hit &= _depth_many(sh, mid) > tol
        out[idx[hit]] = True
    return out


def _free_length(zero_shapes, P, Q):
    """Segment lengths with the parts inside 0-regions removed."""
    D = Q - P
    L = np.hypot(D[:, 0], D[:, 1])
    inside = np.zeros(len(P))
    for sh in zero_shapes:
        if isinstance(sh, PolygonShape) and sh.n < 3:
            continue
        t0, t1 = _clip_many(sh, P, D)
        inside += np.clip(t1 - t0, 0.0, None)
    return L * np.clip(1.0 - inside, 0.0, None)


# ---------------------------------------------------------------------------
# dense solver with obstacles


def _boundary_points(shape: EllipseRectShape, angles) -> np.ndarray:
    """Boundary points hit by rays from the interior point (vectorized)."""
    angles = np.asarray(angles, float).reshape(-1)
    c = shape.interior_point
    L = 2.0 * shape.diameter + 1e-300
    D = L * np.column_stack([np.cos(angles), np.sin(angles)])
    P = np.broadcast_to(c, D.shape)
    _, t1 = _clip_many(shape, P, D)
    return c + np.clip(t1, 0.0, 1.0)[:, None] * D


def _curved_samples(shape: EllipseRectShape, K: int) -> np.ndarray:
    return _boundary_points(shape, 2 * math.pi * np.arange(K) / K)


def _arc_lengths(shape: EllipseRectShape, ka, kb, pieces: int = 64) -> np.ndarray:
    """Counter-clockwise arc lengths between boundary keys ``ka`` and ``kb``."""
    ka = np.asarray(ka, float)
    span = (np.asarray(kb, float) - ka) % (2 * math.pi)
    ang = ka[:, None] + span[:, None] * np.linspace(0.0, 1.0, pieces + 1)[None, :]
    pts = _boundary_points(shape, ang).reshape(len(ka), pieces + 1, 2)
    return np.hypot(*np.diff(pts, axis=1).transpose(2, 0, 1)).sum(axis=1)


def _batch_point_tangents(shape, Z, tol, n: int = 2048, iters: int = 50) -> list:
    """Tangent touch points on a curved shape from every outside point of ``Z``."""
    out = []
    Z = np.asarray(Z, float).reshape(-1, 2)
    outside = np.array([shape.depth(z) < -tol for z in Z], bool)
    Z = Z[outside]
    if not len(Z):
        return out
    step = 2 * math.pi / n
    angs = np.arange(n) * step
    U = np.column_stack([np.cos(angs), np.sin(angs)])
    h = shape.support_values(U)
    for start in range(0, len(Z), 256):
        Zc = Z[start:start + 256]
        vals = h[None, :] - Zc @ U.T
        nxt = np.roll(vals, -1, axis=1)
        pi, ai = np.nonzero(vals * nxt < 0)
        lo, hi, vlo = angs[ai], angs[ai] + step, vals[pi, ai]
        zc = Zc[pi]
        for _ in range(iters):
            mid = 0.5 * (lo + hi)
            um = np.column_stack([np.cos(mid), np.sin(mid)])
            vm = shape.support_values(um) - np.einsum("ij,ij->i", um, zc)
            left = (vm < 0) == (vlo < 0)
            lo = np.where(left, mid, lo)
            vlo = np.where(left, vm, vlo)
            hi = np.where(left, hi, mid)
        for a in 0.5 * (lo + hi):
            out.append(shape.support(np.array([math.cos(a), math.sin(a)]))[0])
    return out


def dense_obstacle_sp(scene: Scene, s, t, K: int = 200) -> OracleReport:
    """Shortest path over a dense visibility graph.

    Nodes are s, t, polygon vertices, ``K`` samples on each curved region and
    tangent points; each 0-region is also a hub reached at its distance.
    The reported ``error_bound`` is twice the largest gap between adjacent
    samples summed over the curved regions (zero for polygonal scenes).
    """
    if K < 50:
        raise ValueError("K must be at least 50")
    s, t = _pt(s), _pt(t)
    x0, y0, x1, y1 = scene.bbox([tuple(s), tuple(t)])
    tol = 1e-9 * max(math.hypot(x1 - x0, y1 - y0), 1e-12)
    for r in scene.obstacles:
        for z in (s, t):
            if r.shape.strictly_contains(z, tol=tol):
                raise ValueError("query point lies inside an obstacle")
    locs = [s, t]
    owner = [None, None]
    error = 0.0
    curved = []
    for r in scene.regions:
        sh = r.shape
        if isinstance(sh, PolygonShape):
            pts = sh.vertices
        else:
            pts = _curved_samples(sh, K)
            curved.append(r)
        for p in pts:
            locs.append(np.asarray(p, float))
            owner.append(r.id)
    point_like = np.array(locs)
    for r in curved:
        if not r.is_obstacle:
            continue
        for tp in _batch_point_tangents(r.shape, point_like, tol):
            locs.append(tp)
            owner.append(r.id)
    obs = scene.obstacles
    for i in range(len(obs)):
        for j in range(i + 1, len(obs)):
            try:
                tangents = common_tangents(obs[i].shape, obs[j].shape)
            except GeometryError:
                continue
            for tp in tangents:
                locs.extend([tp.point_on_A, tp.point_on_B])
                owner.extend([obs[i].id, obs[j].id])
    X = np.array(locs)
    n = len(X)
    rows, cols, w = [], [], []
    # visibility edges
    ii, jj = np.triu_indices(n, 1)
    P, Q = X[ii], X[jj]
    obs_shapes = [r.shape for r in obs]
    blocked = _blocked_many(obs_shapes, P, Q, tol)
    zero_shapes = [r.shape for r in scene.zero_regions]
    keep = ~blocked
    rows.append(ii[keep])
    cols.append(jj[keep])
    w.append(_free_length(zero_shapes, P[keep], Q[keep]))
    # arcs along curved obstacles
    for r in curved:
        idx = np.array([k for k in range(n) if owner[k] == r.id])
        keys = np.array([r.shape.boundary_key(X[k]) for k in idx])
        order = np.argsort(keys, kind="stable")
        idx, keys = idx[order], keys[order]
        nxt = np.roll(np.arange(len(idx)), -1)
        arcs = _arc_lengths(r.shape, keys, keys[nxt])
        error += 2.0 * float(arcs.max())
        if r.is_obstacle:
            rows.append(idx)
            cols.append(idx[nxt])
            w.append(arcs)
    # hubs for 0-regions
    hub = {}
    geo = {}
    zr = scene.zero_regions
    for r in zr:
        hub[r.id] = n + len(hub)
    for r in zr:
        h = hub[r.id]
        dq = [point_shape_distance(X[k], r.shape) for k in range(n)]
        d = np.array([x[0] for x in dq])
        Qs = np.array([x[1] for x in dq]).reshape(-1, 2)
        own = np.array([o == r.id for o in owner])
        free = own | (d == 0.0)
        ok = free | ~_blocked_many(obs_shapes, X, Qs, tol)
        k = np.flatnonzero(ok)
        rows.append(k)
        cols.append(np.full(len(k), h))
        w.append(np.where(free[k], 0.0, d[k]))
        for j in k:
            geo[(int(j), h)] = X[j] if free[j] else Qs[j]
    for a in range(len(zr)):
        for b in range(a + 1, len(zr)):
            d, p, q = shape_distance(zr[a].shape, zr[b].shape, check=False)
            if d > 0 and _blocked_many(obs_shapes, p[None], q[None], tol)[0]:
                continue
            ha, hb = hub[zr[a].id], hub[zr[b].id]
            rows.append(np.array([ha]))
            cols.append(np.array([hb]))
            w.append(np.array([d]))
            geo[(ha, hb)] = (p, q)
    N = n + len(hub)
    value, path = _shortest(N, np.concatenate(rows), np.concatenate(cols), np.concatenate(w), 0, 1)
    witness = _dense_witness(path, X, n, geo)
    return OracleReport(value, DENSE, error, witness,
                        {"nodes": int(N), "K": int(K), "curved_regions": len(curved)})


def _dense_witness(path, X, n, geo):
    pts = []
    for idx, k in enumerate(path):
        if k < n:
            pts.append(X[k])
            continue
        prev = path[idx - 1] if idx > 0 else None
        nxt = path[idx + 1] if idx + 1 < len(path) else None
        if prev is not None and prev < n and (prev, k) in geo:
            pts.append(geo[(prev, k)])
        elif prev is not None and prev >= n:
            pq = geo.get((min(prev, k), max(prev, k)))
            if pq is not None:
                pts.append(pq[1] if prev < k else pq[0])
        if nxt is not None and nxt < n and (nxt, k) in geo:
            pts.append(geo[(nxt, k)])
        elif nxt is not None and nxt >= n:
            pq = geo.get((min(nxt, k), max(nxt, k)))
            if pq is not None:
                pts.append(pq[0] if k < nxt else pq[1])
    return np.array(pts) if pts else np.zeros((0, 2))


# ---------------------------------------------------------------------------
# numeric checks of the cone construction identities


def _line_meet(p, u, q, v):
    """Intersection of the lines ``p + a u`` and ``q + b v``."""
    A = np.column_stack([u, -v])
    a, _ = np.linalg.solve(A, q - p)
    return p + a * u


def _dir(a):
    return np.array([math.cos(a), math.sin(a)])


def _cone_construction(alpha, theta, length=1.0, k=0):
    """Points p, q, q', p' and c for a segment between directions k and k+1."""
    if not (0.0 < alpha < theta < math.pi / 6):
        raise ValueError("need 0 < alpha < theta < pi/6")
    beta = theta - alpha
    base = k * theta
    p = np.zeros(2)
    q = p + length * _dir(base + beta)
    q2 = _line_meet(p, _dir(base + theta), q, _dir(base + math.pi / 2))
    p2 = _line_meet(q, _dir(base + math.pi), p, _dir(base + theta + math.pi / 2))
    c = _line_meet(p, q2 - p, q, p2 - q)
    return p, q, q2, p2, c, beta


def verify_lemma8(alpha: float, theta: float, length: float = 1.0, k: int = 0) -> tuple[float, float]:
    """Residuals of the two length identities for the rotated-segment construction."""
    p, q, q2, _, _, beta = _cone_construction(alpha, theta, length, k)
    pq = math.hypot(*(q - p))
    r1 = abs(math.hypot(*(q2 - p)) - math.cos(beta) / math.cos(theta) * pq)
    r2 = abs(math.hypot(*(q2 - q)) - math.sin(alpha) / math.cos(theta) * pq)
    return r1, r2


def verify_lemma10(alpha: float, theta: float, length: float = 1.0, k: int = 0) -> tuple[float, float]:
    """Residuals for |cp'| + |cq'| and |p'q'| of the two-sided construction."""
    p, q, q2, p2, c, beta = _cone_construction(alpha, theta, length, k)
    pq = math.hypot(*(q - p))
    lhs = math.hypot(*(c - p2)) + math.hypot(*(c - q2))
    rhs = (math.sin(alpha) + math.sin(beta)) / (math.cos(theta) * math.sin(theta)) * pq
    r1 = abs(lhs - rhs)
    r2 = abs(math.hypot(*(q2 - p2)) - pq / math.cos(theta))
    return r1, r2


def verify_lemma15(shape, ds: DirectionSet) -> float:
    """Largest boundary-arc to chord ratio over adjacent original sample points."""
    pts = original_sample_points(shape, ds)
    simp = simplify(shape, pts)
    V = simp.polygon.vertices
    if len(V) < 2:
        return 1.0
    worst = 1.0
    for i in range(len(V)):
        a, b = V[i], V[(i + 1) % len(V)]
        chord = math.hypot(*(b - a))
        if chord <= shape.eta:
            continue
        arc = polyline_length(shape.arc_ccw(a, b))
        worst = max(worst, arc / chord)
    return worst


# ---------------------------------------------------------------------------
# naive structure cross-checks


def naive_locate(tm, p, tol: float | None = None) -> int | None:
    """Smallest id of a face whose trapezoid contains ``p``, by direct polygon tests."""
    tol = tm.eta if tol is None else tol
    z = tm.to_local(p)
    best = None
    for f in tm.faces:
        c = tm.face_polygon(f.id, local=True)
        xl, xr = c[0][0], c[1][0]
        if not (xl - tol <= z[0] <= xr + tol):
            continue
        x = min(max(z[0], xl), xr)

        def y_at(a, b):
            if b[0] == a[0]:
                return None
            return a[1] + (x - a[0]) / (b[0] - a[0]) * (b[1] - a[1])

        yb = y_at(c[0], c[1])
        yt = y_at(c[3], c[2])
        lo = min(c[0][1], c[1][1]) if yb is None else yb
        hi = max(c[2][1], c[3][1]) if yt is None else yt
        if lo - tol <= z[1] <= hi + tol and (best is None or f.id < best):
            best = f.id
    return best


def naive_locate_many(tm, P, tol: float | None = None) -> np.ndarray:
    """:func:`naive_locate` for many points at once; ``-1`` where no face holds a point."""
    tol = tm.eta if tol is None else tol
    Z = np.asarray(P, float).reshape(-1, 2) @ tm.R.T
    out = -np.ones(len(Z), dtype=np.int64)
    for f in sorted(tm.faces, key=lambda f: f.id):
        c = tm.face_polygon(f.id, local=True)
        xl, xr = c[0][0], c[1][0]
        todo = (out < 0) & (Z[:, 0] >= xl - tol) & (Z[:, 0] <= xr + tol)
        if not todo.any():
            continue
        x = np.clip(Z[:, 0], xl, xr)
        if xr > xl:
            lo = c[0][1] + (x - xl) / (xr - xl) * (c[1][1] - c[0][1])
            hi = c[3][1] + (x - xl) / (xr - xl) * (c[2][1] - c[3][1])
        else:
            lo = np.full(len(Z), min(c[0][1], c[1][1]))
            hi = np.full(len(Z), max(c[2][1], c[3][1]))
        out[todo & (lo - tol <= Z[:, 1]) & (Z[:, 1] <= hi + tol)] = f.id
    return out


def naive_theta(points, ds: DirectionSet, obstacles=(), tol: float = 1e-9) -> np.ndarray:
    """Cone-nearest table by brute force: ``out[i, c]`` is a point id or -1."""
    from .geom import segment_hits_interior
    P = np.asarray(points, float).reshape(-1, 2)
    obs = [PolygonShape(o, check=False) if not isinstance(o, PolygonShape) else o for o in obstacles]
    n, m = len(P), ds.m
    out = -np.ones((n, m), dtype=np.int64)
    bis = np.array([_dir((c + 0.5) * ds.theta) for c in range(m)])
    for i in range(n):
        best = [None] * m
        for j in range(n):
            if i == j:
                continue
            d = P[j] - P[i]
            if d @ d <= tol * tol:
                continue
            ang = math.atan2(d[1], d[0]) % (2 * math.pi)
            c = min(int(ang / ds.theta), m - 1)
            proj = float(d @ bis[c])
            if best[c] is not None and (proj, j) >= best[c]:
                continue
            if any(segment_hits_interior(P[i], P[j], o, tol) for o in obs):
                continue
            best[c] = (proj, j)
        for c in range(m):
            if best[c] is not None:
                out[i, c] = best[c][1]
    return out


# ---------------------------------------------------------------------------
# path validity


def path_violations(scene: Scene, path, samples: int = 1000, tol: float | None = None,
                    arc_tol: float = 1e-6) -> list[str]:
    """Problems found by point-sampling a realized path; empty when valid.

    Plane and boundary segments must stay out of obstacle interiors, zero
    segments inside their 0-region, and segment costs must match their media.
    Boundary polylines on curved obstacles are discretized, so points of those
    are allowed ``arc_tol`` times the obstacle diameter of depth.
    """
    tol = scene.eta * 10 if tol is None else tol
    out = []
    prev_end = np.asarray(path.source, float)
    obs = scene.obstacles
    for i, seg in enumerate(path.segments):
        pts = np.asarray(seg.points, float)
        if math.hypot(*(pts[0] - prev_end)) > 1e3 * tol:
            out.append(f"segment {i} does not start where the previous one ended")
        prev_end = pts[-1]
        per = max(2, samples // max(1, len(pts) - 1))
        u = np.linspace(0.0, 1.0, per)
        S = np.concatenate([a + u[:, None] * (b - a) for a, b in zip(pts, pts[1:])])
        length = polyline_length(pts)
        if seg.medium == "zero":
            if seg.cost != 0.0:
                out.append(f"segment {i}: zero segment with cost {seg.cost}")
            sh = scene.regions[seg.region].shape
            d = _depth_many(sh, S) if not (isinstance(sh, PolygonShape) and sh.n < 3) else \
                -np.array([point_shape_distance(z, sh)[0] for z in S])
            if np.min(d) < -max(tol, 1e3 * scene.eta):
                out.append(f"segment {i}: leaves 0-region {seg.region} by {-np.min(d):.3g}")
            continue
        if abs(seg.cost - length) > 1e-9 * max(1.0, length):
            out.append(f"segment {i}: cost {seg.cost} differs from length {length}")
        for r in obs:
            slack = tol
            if seg.medium == "boundary" and seg.region == r.id and not isinstance(r.shape, PolygonShape):
                slack = max(tol, arc_tol * r.shape.diameter)
            d = _depth_many(r.shape, S)
            if np.max(d) > slack:
                out.append(f"segment {i}: enters obstacle {r.id} by {np.max(d):.3g}")
    if math.hypot(*(prev_end - np.asarray(path.target, float))) > 1e3 * tol:
        out.append("path does not end at the target")
    return out


# ---------------------------------------------------------------------------
# free-space diagram references

# lattice steps of the grid oracle: 8 king moves and 8 knight moves (undirected)
_GRID_STEPS = ((1, 0), (0, 1), (1, 1), (1, -1), (1, 2), (2, 1), (2, -1), (1, -2))
_GRID_QUAD = (0.125, 0.375, 0.625, 0.875)


def grid_minex(pi, sigma, d: float, n: int = 500) -> OracleReport:
    """MinEx on an ``(n+1) x (n+1)`` lattice over the diagram.

    Edges join lattice nodes along king and knight moves. An edge costs its
    length times the forbidden fraction of four midpoint-rule samples.
    ``error_bound`` is the angular error of the lattice metric,
    ``sec(phi/2) - 1`` relative with ``phi`` the widest gap between step
    directions, plus one knight step of misclassified length for each
    boundary crossing, counting two crossings per diagram cell.
    """
    from .frechet import PolyCurve

    pi = pi if isinstance(pi, PolyCurve) else PolyCurve(pi)
    sigma = sigma if isinstance(sigma, PolyCurve) else PolyCurve(sigma)
    W, H = pi.length, sigma.length
    hx, hy = W / n, H / n
    N = n + 1
    idx = np.arange(N * N).reshape(N, N)  # idx[ix, iy]
    rows, cols, wts = [], [], []
    for dx, dy in _GRID_STEPS:
        ix0, ix1 = 0, N - dx
        iy0, iy1 = max(0, -dy), min(N, N - dy)
        a = idx[ix0:ix1, iy0:iy1].ravel()
        b = idx[ix0 + dx:ix1 + dx, iy0 + dy:iy1 + dy].ravel()
        X = (a // N) * hx
        Y = (a % N) * hy
        forb = np.zeros(len(a))
        for f in _GRID_QUAD:
            diff = pi(X + f * dx * hx) - sigma(Y + f * dy * hy)
            forb += np.hypot(diff[:, 0], diff[:, 1]) > d
        rows.append(a)
        cols.append(b)
        wts.append(math.hypot(dx * hx, dy * hy) * forb / len(_GRID_QUAD))
    value, path = _shortest(N * N, np.concatenate(rows), np.concatenate(cols),
                            np.concatenate(wts), 0, N * N - 1)
    ang = sorted({math.atan2(sy * dy * hy, sx * dx * hx) % math.pi
                  for dx, dy in _GRID_STEPS for sx, sy in ((1, 1),)})
    gaps = np.diff(ang + [ang[0] + math.pi])
    phi = float(np.max(gaps))
    crossings = 2 * pi.n_segments * sigma.n_segments
    knight = max(math.hypot(hx, 2 * hy), math.hypot(2 * hx, hy))
    bound = (1.0 / math.cos(phi / 2) - 1.0) * value + crossings * knight
    pts = np.array([[(v // N) * hx, (v % N) * hy] for v in path])
    return OracleReport(value, GRID, bound, pts, {"n": n, "max_angle_gap": phi})


def _free_interval(p, a, b, d: float):
    """Parameters ``[t0, t1]`` in ``[0, 1]`` where ``|a + t(b-a) - p| <= d``, or ``None``."""
    e = b - a
    f = a - p
    A = float(e @ e)
    B = float(f @ e)
    C = float(f @ f) - d * d
    disc = B * B - A * C
    if disc < 0:
        return None
    r = math.sqrt(disc)
    t0, t1 = max(0.0, (-B - r) / A), min(1.0, (-B + r) / A)
    return (t0, t1) if t0 <= t1 else None


def weak_frechet_reachable(pi, sigma, d: float) -> bool:
    """Cell-graph search over free boundary intervals.

    Each cell's free space is convex, so two neighbouring cells are linked
    exactly when the free part of their shared side is nonempty.
    """
    from .frechet import PolyCurve

    pi = pi if isinstance(pi, PolyCurve) else PolyCurve(pi)
    sigma = sigma if isinstance(sigma, PolyCurve) else PolyCurve(sigma)
    P, S = pi.vertices, sigma.vertices
    if np.hypot(*(P[0] - S[0])) > d or np.hypot(*(P[-1] - S[-1])) > d:
        return False
    n1, n2 = pi.n_segments, sigma.n_segments
    seen = {(0, 0)}
    stack = [(0, 0)]
    while stack:
        i, j = stack.pop()
        if (i, j) == (n1 - 1, n2 - 1):
            return True
        # side x = pi vertex i+1 against sigma segment j, and so on
        moves = []
        if i + 1 < n1 and _free_interval(P[i + 1], S[j], S[j + 1], d) is not None:
            moves.append((i + 1, j))
        if i > 0 and _free_interval(P[i], S[j], S[j + 1], d) is not None:
            moves.append((i - 1, j))
        if j + 1 < n2 and _free_interval(S[j + 1], P[i], P[i + 1], d) is not None:
            moves.append((i, j + 1))
        if j > 0 and _free_interval(S[j], P[i], P[i + 1], d) is not None:
            moves.append((i, j - 1))
        for c in moves:
            if c not in seen:
                seen.add(c)
                stack.append(c)
    return False
