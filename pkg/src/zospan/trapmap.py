"""Trapezoidal maps over simplified regions, one per direction.

Each map is built in a frame rotated so the direction points up; walls are
then vertical extensions. Construction is randomized incremental with a
history DAG for point location. Points sharing an x-coordinate are ordered
by y (a symbolic shear). Vertices of different regions closer than the
tolerance are merged, vertices touching another region's edge split that
edge, and edges shared by two regions become one segment with a region on
each side, so touching scenes are handled without zero-width faces.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

FRAME = -1
_LEAF, _XNODE, _YNODE = 0, 1, 2


class TrapMapError(RuntimeError):
    """Inconsistent input detected while building a map."""


class PointInRegionError(ValueError):
    """The located point lies inside a region."""


@dataclass(frozen=True)
class Wall:
    """Vertical side of a face, in scene coordinates."""
    emitter: int          # vertex id of the emitting sample point
    emitter_xy: tuple
    bottom_xy: tuple      # landing point on the face's bottom segment
    top_xy: tuple         # landing point on the face's top segment

    @property
    def length(self) -> float:
        return math.hypot(self.top_xy[0] - self.bottom_xy[0], self.top_xy[1] - self.bottom_xy[1])


@dataclass(frozen=True)
class Adjacency:
    bottom: int
    top: int
    face: int | None       # None for regions sharing a boundary segment
    walls: tuple


@dataclass(frozen=True)
class Face:
    id: int
    bottom_region: int
    top_region: int
    left_vertex: int
    right_vertex: int


def rotation_for(angle: float) -> np.ndarray:
    """Matrix taking direction ``angle`` to +y."""
    phi = math.pi / 2 - angle
    c, s = math.cos(phi), math.sin(phi)
    return np.array([[c, -s], [s, c]])


class TrapMap:
    """Trapezoidal decomposition of the frame minus a set of convex polygons.

    ``polygons`` is a list of ``(region_id, vertices, vertex_keys)``; vertices
    are counter-clockwise and ``vertex_keys`` are caller ids carried through to
    walls (typically sample point ids). Polygons with fewer than three
    vertices are allowed: two vertices form a thin segment, one vertex is
    ignored (callers locate such points instead).
    """

    def __init__(self, polygons, angle: float, *, seed: int = 0, eta: float = 1e-9,
                 bounds=None, k: int | None = None):
        self.angle = float(angle)
        self.k = k
        self.R = rotation_for(angle)
        self.eta = float(eta)
        self._prepare(polygons, bounds)
        rng = np.random.default_rng(seed)
        order = rng.permutation(self._nseg_real)
        self._init_structure()
        for si in order:
            self._insert(int(si))
        self._collect_faces()

    # ------------------------------------------------------------------
    # input preparation
    def _prepare(self, polygons, bounds) -> None:
        eta = self.eta
        raw_xy, raw_key, raw_region, chains = [], [], [], []
        for region, verts, keys in polygons:
            verts = np.asarray(verts, float).reshape(-1, 2)
            if len(verts) == 0:
                continue
            start = len(raw_key)
            raw_xy.append(verts @ self.R.T)
            raw_key.extend(keys)
            raw_region.extend([region] * len(verts))
            chains.append((region, list(range(start, start + len(verts)))))
        raw = np.vstack(raw_xy) if raw_xy else np.zeros((0, 2))
        # merge coincident vertices (across regions too)
        parent = list(range(len(raw)))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        if len(raw) > 1:
            for i, j in cKDTree(raw).query_pairs(eta):
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[max(ri, rj)] = min(ri, rj)
        root_to_vid: dict[int, int] = {}
        vid_of = []
        xy = []
        self.vertex_keys: list[list] = []
        self.vertex_regions: list[set] = []
        for i in range(len(raw)):
            r = find(i)
            if r not in root_to_vid:
                root_to_vid[r] = len(xy)
                xy.append(raw[r])
                self.vertex_keys.append([])
                self.vertex_regions.append(set())
            v = root_to_vid[r]
            vid_of.append(v)
            self.vertex_keys[v].append(raw_key[i])
            self.vertex_regions[v].add(raw_region[i])
        nreal = len(xy)
        # frame
        if bounds is None:
            pts = raw if len(raw) else np.zeros((1, 2))
        else:
            b = np.asarray(bounds, float).reshape(-1, 2)
            pts = np.vstack([raw.reshape(-1, 2), b @ self.R.T])
        lo, hi = pts.min(axis=0), pts.max(axis=0)
        c = 0.5 * (lo + hi)
        half = 1.5 * np.maximum(hi - lo, max(float(np.max(hi - lo)), 1.0) * 1e-3)
        fx0, fy0 = c - half
        fx1, fy1 = c + half
        self.frame = (float(fx0), float(fy0), float(fx1), float(fy1))
        xy.extend([np.array([fx0, fy0]), np.array([fx1, fy0]),
                   np.array([fx0, fy1]), np.array([fx1, fy1])])
        self._frame_v = (nreal, nreal + 1, nreal + 2, nreal + 3)
        self.vx = [float(p[0]) for p in xy]
        self.vy = [float(p[1]) for p in xy]
        order = sorted(range(len(xy)), key=lambda i: (self.vx[i], self.vy[i], i))
        self.rank = [0] * len(xy)
        for r, i in enumerate(order):
            self.rank[i] = r
        self.nvert_real = nreal

        # directed edges, interior on the left
        edges = []
        for region, idx in chains:
            vids = [vid_of[i] for i in idx]
            vids = [v for i, v in enumerate(vids) if i == 0 or v != vids[i - 1]]
            if len(vids) > 1 and vids[0] == vids[-1]:
                vids.pop()
            if len(vids) == 2:
                edges.append((vids[0], vids[1], region, True))
            elif len(vids) >= 3:
                for i in range(len(vids)):
                    edges.append((vids[i], vids[(i + 1) % len(vids)], region, False))
        edges = self._split_t_junctions(edges)
        segs: dict[tuple, list] = {}
        for a, b, region, thin in edges:
            if a == b:
                continue
            p, q = (a, b) if self.rank[a] < self.rank[b] else (b, a)
            rec = segs.setdefault((p, q), [None, None, False])
            if thin:
                rec[0] = rec[1] = region
                rec[2] = True
                continue
            side = 0 if p == a else 1  # 0: interior above
            if rec[side] is not None and rec[side] != region and not rec[2]:
                raise TrapMapError(f"regions {rec[side]} and {region} overlap")
            rec[side] = region
        self.seg_p, self.seg_q, self.seg_above, self.seg_below, self.seg_thin = [], [], [], [], []
        self.shared: list[tuple] = []
        for (p, q), (above, below, thin) in segs.items():
            self.seg_p.append(p)
            self.seg_q.append(q)
            self.seg_above.append(above)
            self.seg_below.append(below)
            self.seg_thin.append(thin)
            if not thin and above is not None and below is not None and above != below:
                self.shared.append((below, above))
        self._nseg_real = len(self.seg_p)
        bl, br, tl, tr = self._frame_v
        self.seg_p += [bl, tl]
        self.seg_q += [br, tr]
        self.seg_above += [None, FRAME]
        self.seg_below += [FRAME, None]
        self.seg_thin += [False, False]
        self._seg_bottom = self._nseg_real
        self._seg_top = self._nseg_real + 1

    def _split_t_junctions(self, edges):
        """Split edges at vertices of other regions lying on them."""
        if not edges:
            return edges
        P = np.column_stack([self.vx[: self.nvert_real], self.vy[: self.nvert_real]])
        E = np.array([(a, b) for a, b, _, _ in edges])
        pa, pb = P[E[:, 0]], P[E[:, 1]]
        d = pb - pa
        L2 = np.einsum("ij,ij->i", d, d)
        L = np.sqrt(L2)
        safe = np.where(L2 > 0, L2, 1.0)
        rel_x = P[None, :, 0] - pa[:, None, 0]
        rel_y = P[None, :, 1] - pa[:, None, 1]
        t = (rel_x * d[:, None, 0] + rel_y * d[:, None, 1]) / safe[:, None]
        dist = np.abs(rel_x * d[:, None, 1] - rel_y * d[:, None, 0]) / np.where(L > 0, L, 1.0)[:, None]
        tl = (self.eta / np.where(L > 0, L, 1.0))[:, None]
        hits = (dist <= self.eta) & (t > tl) & (t < 1 - tl)
        out = []
        rows = set(np.flatnonzero(hits.any(axis=1)).tolist())
        for i, (a, b, region, thin) in enumerate(edges):
            if L2[i] == 0.0:
                continue
            if i not in rows:
                out.append((a, b, region, thin))
                continue
            hit = np.flatnonzero(hits[i])
            chain = [a] + [int(j) for j in hit[np.argsort(t[i, hit])]] + [b]
            for u, v in zip(chain, chain[1:]):
                out.append((u, v, region, thin))
        return out

    # ------------------------------------------------------------------
    # randomized incremental construction
    def _init_structure(self) -> None:
        self.t_top, self.t_bot, self.t_left, self.t_right = [], [], [], []
        self.t_alive, self.t_node = [], []
        self.byleft: dict[int, set] = {}
        self.n_kind, self.n_a, self.n_l, self.n_r = [], [], [], []
        bl, br, tl, tr = self._frame_v
        t0 = self._new_trap(self._seg_top, self._seg_bottom, bl, tr)
        self.root = self.t_node[t0]

    def _new_node(self, kind, a, l=-1, r=-1) -> int:
        self.n_kind.append(kind)
        self.n_a.append(a)
        self.n_l.append(l)
        self.n_r.append(r)
        return len(self.n_kind) - 1

    def _new_trap(self, top, bot, left, right) -> int:
        t = len(self.t_top)
        self.t_top.append(top)
        self.t_bot.append(bot)
        self.t_left.append(left)
        self.t_right.append(right)
        self.t_alive.append(True)
        self.t_node.append(self._new_node(_LEAF, t))
        self.byleft.setdefault(left, set()).add(t)
        return t

    def _set_right(self, t, right) -> None:
        self.t_right[t] = right

    def _kill(self, t) -> None:
        self.t_alive[t] = False
        self.byleft[self.t_left[t]].discard(t)

    def _orient_v(self, a, b, c) -> float:
        vx, vy = self.vx, self.vy
        return (vx[b] - vx[a]) * (vy[c] - vy[a]) - (vy[b] - vy[a]) * (vx[c] - vx[a])

    def _seg_above_point(self, t, s) -> bool:
        """Is the left endpoint of segment ``s`` (continuing along ``s``) above segment ``t``?"""
        p, q = self.seg_p[s], self.seg_q[s]
        tp, tq = self.seg_p[t], self.seg_q[t]
        if tp == p:
            return self._orient_v(tp, tq, q) > 0
        o = self._orient_v(tp, tq, p)
        L = math.hypot(self.vx[tq] - self.vx[tp], self.vy[tq] - self.vy[tp])
        if abs(o) <= self.eta * L:
            return self._orient_v(tp, tq, q) > 0
        return o > 0

    def _locate_segment_start(self, s) -> int:
        p = self.seg_p[s]
        rank = self.rank
        n = self.root
        kind, na, nl, nr = self.n_kind, self.n_a, self.n_l, self.n_r
        while kind[n] != _LEAF:
            if kind[n] == _XNODE:
                v = na[n]
                n = nr[n] if (v == p or rank[p] > rank[v]) else nl[n]
            else:
                n = nl[n] if self._seg_above_point(na[n], s) else nr[n]
        return na[n]

    def _insert(self, s) -> None:
        p, q = self.seg_p[s], self.seg_q[s]
        rank = self.rank
        d0 = self._locate_segment_start(s)
        chain = [d0]
        while rank[self.t_right[chain[-1]]] < rank[q]:
            cur = chain[-1]
            r = self.t_right[cur]
            cands = self.byleft.get(r, ())
            if self._orient_v(p, q, r) > 0:
                nxt = [t for t in cands if self.t_bot[t] == self.t_bot[cur]]
            else:
                nxt = [t for t in cands if self.t_top[t] == self.t_top[cur]]
            if len(nxt) != 1:
                raise TrapMapError("broken neighbour structure (intersecting segments?)")
            chain.append(nxt[0])
        for t in chain:
            self._kill(t)
        first, last = chain[0], chain[-1]
        A = B = None
        if self.t_left[first] != p:
            A = self._new_trap(self.t_top[first], self.t_bot[first], self.t_left[first], p)
        if self.t_right[last] != q:
            B = self._new_trap(self.t_top[last], self.t_bot[last], q, self.t_right[last])
        U = self._new_trap(self.t_top[first], s, p, q)
        L = self._new_trap(s, self.t_bot[first], p, q)
        pieces = []
        for j, t in enumerate(chain):
            if j > 0:
                r = self.t_right[chain[j - 1]]
                if self._orient_v(p, q, r) > 0:
                    self._set_right(U, r)
                    U = self._new_trap(self.t_top[t], s, r, q)
                else:
                    self._set_right(L, r)
                    L = self._new_trap(s, self.t_bot[t], r, q)
            pieces.append((U, L))
        # history DAG
        last_j = len(chain) - 1
        for j, t in enumerate(chain):
            U, L = pieces[j]
            node = self.t_node[t]
            yargs = (_YNODE, s, self.t_node[U], self.t_node[L])
            left_cut = j == 0 and A is not None
            right_cut = j == last_j and B is not None
            if left_cut and right_cut:
                y = self._new_node(*yargs)
                xq = self._new_node(_XNODE, q, y, self.t_node[B])
                self._rewrite(node, _XNODE, p, self.t_node[A], xq)
            elif left_cut:
                y = self._new_node(*yargs)
                self._rewrite(node, _XNODE, p, self.t_node[A], y)
            elif right_cut:
                y = self._new_node(*yargs)
                self._rewrite(node, _XNODE, q, y, self.t_node[B])
            else:
                self._rewrite(node, *yargs)

    def _rewrite(self, node, kind, a, l, r) -> None:
        self.n_kind[node] = kind
        self.n_a[node] = a
        self.n_l[node] = l
        self.n_r[node] = r

    # ------------------------------------------------------------------
    # faces
    def _seg_y(self, s, x) -> float:
        p, q = self.seg_p[s], self.seg_q[s]
        x0, x1 = self.vx[p], self.vx[q]
        y0, y1 = self.vy[p], self.vy[q]
        if x1 == x0:
            return y0 if x <= x0 else y1
        t = (x - x0) / (x1 - x0)
        return y0 + t * (y1 - y0)

    def _collect_faces(self) -> None:
        faces = []
        for t, alive in enumerate(self.t_alive):
            if not alive:
                continue
            b = self.t_bot[t]
            if self.seg_above[b] is not None and not self.seg_thin[b]:
                continue  # inside a region
            top = self.t_top[t]
            faces.append(Face(t, self.seg_below[b], self.seg_above[top],
                              self.t_left[t], self.t_right[t]))
        self.faces: list[Face] = faces
        self._face_by_id = {f.id: f for f in faces}
        n = len(faces)
        xl = np.empty(n)
        xr = np.empty(n)
        cb = np.empty((n, 4))
        ct = np.empty((n, 4))
        for i, f in enumerate(faces):
            xl[i] = self.vx[f.left_vertex]
            xr[i] = self.vx[f.right_vertex]
            for arr, s in ((cb, self.t_bot[f.id]), (ct, self.t_top[f.id])):
                p, q = self.seg_p[s], self.seg_q[s]
                arr[i] = (self.vx[p], self.vy[p], self.vx[q], self.vy[q])
        self._fxl, self._fxr, self._fcb, self._fct = xl, xr, cb, ct
        self._fids = np.array([f.id for f in faces], dtype=int)

    def face(self, fid: int) -> Face:
        return self._face_by_id[fid]

    def to_local(self, p) -> np.ndarray:
        return self.R @ np.asarray(p, float)

    def to_scene(self, p) -> tuple:
        v = self.R.T @ np.asarray(p, float)
        return (float(v[0]), float(v[1]))

    def face_polygon(self, fid: int, *, local: bool = False) -> np.ndarray:
        """Corners of the face (bottom-left, bottom-right, top-right, top-left)."""
        xl, xr = self.vx[self.t_left[fid]], self.vx[self.t_right[fid]]
        b, t = self.t_bot[fid], self.t_top[fid]
        pts = np.array([[xl, self._seg_y(b, xl)], [xr, self._seg_y(b, xr)],
                        [xr, self._seg_y(t, xr)], [xl, self._seg_y(t, xl)]])
        return pts if local else pts @ self.R

    def landing(self, fid: int, p) -> tuple[tuple, tuple]:
        """Points straight below and above ``p`` on the face's bottom and top segments."""
        z = self.to_local(p)
        yb = self._seg_y(self.t_bot[fid], z[0])
        yt = self._seg_y(self.t_top[fid], z[0])
        return self.to_scene((z[0], yb)), self.to_scene((z[0], yt))

    def face_area(self, fid: int) -> float:
        c = self.face_polygon(fid, local=True)
        w = c[1, 0] - c[0, 0]
        return 0.5 * w * ((c[3, 1] - c[0, 1]) + (c[2, 1] - c[1, 1]))

    @property
    def frame_area(self) -> float:
        x0, y0, x1, y1 = self.frame
        return (x1 - x0) * (y1 - y0)

    @property
    def n_segments(self) -> int:
        return self._nseg_real

    # ------------------------------------------------------------------
    # point location
    def _dag_locate(self, z) -> int:
        zx, zy = float(z[0]), float(z[1])
        vx, vy = self.vx, self.vy
        kind, na, nl, nr = self.n_kind, self.n_a, self.n_l, self.n_r
        sp, sq = self.seg_p, self.seg_q
        n = self.root
        while kind[n] != _LEAF:
            if kind[n] == _XNODE:
                v = na[n]
                n = nl[n] if (zx < vx[v] or (zx == vx[v] and zy < vy[v])) else nr[n]
            else:
                s = na[n]
                a, b = sp[s], sq[s]
                o = (vx[b] - vx[a]) * (zy - vy[a]) - (vy[b] - vy[a]) * (zx - vx[a])
                n = nl[n] if o >= 0 else nr[n]
        return na[n]

    def faces_containing(self, p, tol: float | None = None) -> np.ndarray:
        """Ids of all faces containing scene point ``p`` within ``tol`` (linear scan)."""
        tol = self.eta if tol is None else tol
        z = self.to_local(p)
        return self._scan_local(z, tol)

    def _scan_local(self, z, tol) -> np.ndarray:
        if len(self._fids) == 0:
            return self._fids
        x = z[0]
        inx = (self._fxl - tol <= x) & (x <= self._fxr + tol)

        def yline(c):
            dx = c[:, 2] - c[:, 0]
            safe = np.where(dx == 0, 1.0, dx)
            t = np.clip((x - c[:, 0]) / safe, 0.0, 1.0)
            y = c[:, 1] + t * (c[:, 3] - c[:, 1])
            return y, dx == 0, c

        yb, vb, cb = yline(self._fcb)
        yt, vt, ct = yline(self._fct)
        lo = np.where(vb, np.minimum(cb[:, 1], cb[:, 3]), yb)
        hi = np.where(vt, np.maximum(ct[:, 1], ct[:, 3]), yt)
        ok = inx & (lo - tol <= z[1]) & (z[1] <= hi + tol)
        return self._fids[ok]

    def _near_boundary(self, fid, z, tol) -> bool:
        c = self.face_polygon(fid, local=True)
        for i in range(4):
            a, b = c[i], c[(i + 1) % 4]
            d = b - a
            dd = float(d @ d)
            t = 0.0 if dd == 0 else min(1.0, max(0.0, float((z - a) @ d) / dd))
            if math.hypot(*(z - a - t * d)) <= tol:
                return True
        return False

    def locate(self, p) -> Face:
        """Face containing ``p``; boundary ties go to the smallest face id.

        Raises :class:`PointInRegionError` for points inside a region and
        ``ValueError`` for points outside the frame.
        """
        z = self.to_local(p)
        x0, y0, x1, y1 = self.frame
        if not (x0 <= z[0] <= x1 and y0 <= z[1] <= y1):
            raise ValueError("point lies outside the map frame")
        t = self._dag_locate(z)
        if t in self._face_by_id and not self._near_boundary(t, z, self.eta):
            return self._face_by_id[t]
        cands = self._scan_local(z, self.eta)
        if len(cands):
            return self._face_by_id[int(cands.min())]
        raise PointInRegionError("point lies inside a region")

    # ------------------------------------------------------------------
    # adjacency
    def wall(self, fid: int, side: str) -> Wall | None:
        v = self.t_left[fid] if side == "left" else self.t_right[fid]
        if v >= self.nvert_real:
            return None
        x = self.vx[v]
        yb = self._seg_y(self.t_bot[fid], x)
        yt = self._seg_y(self.t_top[fid], x)
        return Wall(v, self.to_scene((x, self.vy[v])), self.to_scene((x, yb)), self.to_scene((x, yt)))

    def face_adjacencies(self) -> list[Adjacency]:
        """Faces whose bottom and top belong to two different regions.

        Region pairs sharing a boundary segment are reported with ``face=None``.
        """
        out = []
        for f in self.faces:
            if f.bottom_region == FRAME or f.top_region == FRAME:
                continue
            if f.bottom_region is None or f.top_region is None:
                continue
            if f.bottom_region == f.top_region:
                continue
            walls = tuple(w for w in (self.wall(f.id, "left"), self.wall(f.id, "right")) if w is not None)
            out.append(Adjacency(f.bottom_region, f.top_region, f.id, walls))
        for below, above in sorted(set(self.shared)):
            out.append(Adjacency(below, above, None, ()))
        return out

    def walls(self):
        """Every wall of every free face, keyed by ``(emitter, direction)``.

        Direction is ``+1`` for the part above the emitter and ``-1`` below.
        The value is the landing point and the region landed on.
        """
        out = {}
        for f in self.faces:
            for side in ("left", "right"):
                w = self.wall(f.id, side)
                if w is None:
                    continue
                emit_local = self.to_local(w.emitter_xy)
                top_local = self.to_local(w.top_xy)
                bot_local = self.to_local(w.bottom_xy)
                if top_local[1] > emit_local[1] + self.eta:
                    out[(w.emitter, 1)] = (w.top_xy, f.top_region, f.id)
                if bot_local[1] < emit_local[1] - self.eta:
                    out[(w.emitter, -1)] = (w.bottom_xy, f.bottom_region, f.id)
        return out


class MirroredTrapMap:
    """Map for the opposite direction, sharing the structure of ``base``.

    Turning the frame by pi keeps every wall and face; only bottom and top,
    and left and right, trade places.
    """

    def __init__(self, base: TrapMap, k: int | None = None):
        self.base = base
        self.k = k
        self.angle = base.angle + math.pi
        self.R = -base.R
        self.eta = base.eta
        x0, y0, x1, y1 = base.frame
        self.frame = (-x1, -y1, -x0, -y0)
        self.faces = [self._flip(f) for f in base.faces]
        self._face_by_id = {f.id: f for f in self.faces}
        self.vertex_keys = base.vertex_keys
        self.vertex_regions = base.vertex_regions
        self.nvert_real = base.nvert_real

    @staticmethod
    def _flip(f: Face) -> Face:
        return Face(f.id, f.top_region, f.bottom_region, f.right_vertex, f.left_vertex)

    @staticmethod
    def _flip_wall(w: Wall | None) -> Wall | None:
        return None if w is None else Wall(w.emitter, w.emitter_xy, w.top_xy, w.bottom_xy)

    def face(self, fid: int) -> Face:
        return self._face_by_id[fid]

    def to_local(self, p) -> np.ndarray:
        return -self.base.to_local(p)

    def to_scene(self, p) -> tuple:
        return self.base.to_scene(-np.asarray(p, float))

    def face_polygon(self, fid: int, *, local: bool = False) -> np.ndarray:
        c = self.base.face_polygon(fid, local=local)[[2, 3, 0, 1]]
        return -c if local else c

    def face_area(self, fid: int) -> float:
        return self.base.face_area(fid)

    @property
    def frame_area(self) -> float:
        return self.base.frame_area

    @property
    def n_segments(self) -> int:
        return self.base.n_segments

    def faces_containing(self, p, tol: float | None = None) -> np.ndarray:
        return self.base.faces_containing(p, tol)

    def locate(self, p) -> Face:
        return self._flip(self.base.locate(p))

    def landing(self, fid: int, p) -> tuple[tuple, tuple]:
        bottom, top = self.base.landing(fid, p)
        return top, bottom

    def wall(self, fid: int, side: str) -> Wall | None:
        return self._flip_wall(self.base.wall(fid, "right" if side == "left" else "left"))

    def face_adjacencies(self) -> list[Adjacency]:
        return [Adjacency(a.top, a.bottom, a.face, tuple(self._flip_wall(w) for w in a.walls))
                for a in self.base.face_adjacencies()]

    def walls(self):
        return {(e, -sign): v for (e, sign), v in self.base.walls().items()}
