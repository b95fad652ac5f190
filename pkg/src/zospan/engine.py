"""Build the query structure over a scene and answer s-t queries.

The graph joins sample points of all regions. Edge kinds:

``anchor``      sample point of a 0-region to its anchor, weight 0
``adjacency``   anchors of two 0-regions sharing a trapezoid face, weight d(A, B)
``wall``        endpoints of a face side when an obstacle is involved, weight |ab|
``theta``       Theta-graph edge between different regions, weight |pq|
``boundary``    consecutive sample points along an obstacle, weight |aa'|
``query``       query point to a 0-region anchor, weight d(s, A)

Queries never modify the structure; the query points and the points they
generate live in a per-query overlay.
"""
from __future__ import annotations

import heapq
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .geom import (ConvexShape, GeometryError, PolygonShape, common_tangents, find_seams,
                   point_shape_distance, point_tangents, polyline_length, ray_intersect,
                   runs_along_seam, shape_distance, shorter_arc)
from .sampling import (ORIGINAL, PROPAGATED, QUERY, TANGENT, DirectionSet, SamplePoint,
                       assign_anchor, boundary_neighbours, choose_theta, original_sample_points,
                       simplify)
from .scene import Scene, SceneError
from .theta import ObstacleSet, ThetaGraph
from .trapmap import FRAME, MirroredTrapMap, PointInRegionError, TrapMap

log = logging.getLogger("zospan")

EDGE_KINDS = ("anchor", "adjacency", "wall", "theta", "boundary", "query")


class QueryError(ValueError):
    """Invalid query endpoints (for example inside an obstacle)."""


class NoPathError(RuntimeError):
    """The target cannot be reached from the source."""


@dataclass
class Edge:
    u: int
    v: int
    w: float
    kind: str
    geom: tuple | None = None   # (p_on_u_side, q_on_v_side) for adjacency/query edges
    ccw: bool = True            # boundary edges: u -> v walks counter-clockwise


@dataclass
class PathSegment:
    points: np.ndarray
    medium: str                 # "plane", "zero", "obstacle"
    region: int | None
    cost: float

    @property
    def length(self) -> float:
        return polyline_length(self.points)

    def to_dict(self) -> dict:
        return {"medium": self.medium, "region": self.region, "cost": self.cost,
                "points": [[float(x), float(y)] for x, y in self.points]}


@dataclass
class WeightedPath:
    source: np.ndarray
    target: np.ndarray
    segments: list
    graph_weight: float
    vertices: list = field(default_factory=list)
    edge_kinds: list = field(default_factory=list)

    @property
    def weight(self) -> float:
        """Realized cost of the geometric path."""
        return float(sum(s.cost for s in self.segments))

    @property
    def length(self) -> float:
        return float(sum(s.length for s in self.segments))

    def polyline(self) -> np.ndarray:
        pts = [self.source]
        for s in self.segments:
            pts.extend(s.points[1:])
        return np.array(pts)

    def to_dict(self) -> dict:
        return {"source": self.source.tolist(), "target": self.target.tolist(),
                "graph_weight": self.graph_weight, "weight": self.weight,
                "segments": [s.to_dict() for s in self.segments]}


# ---------------------------------------------------------------------------
# graph helpers


class _Graph:
    """Adjacency lists over a growing vertex set.

    ``reject`` may veto edges before they are stored.
    """

    def __init__(self, reject=None):
        self.adj: list[list[tuple[int, float, int]]] = []
        self.edges: list[Edge] = []
        self.reject = reject

    def ensure(self, n: int) -> None:
        while len(self.adj) < n:
            self.adj.append([])

    def add(self, e: Edge) -> int:
        self.ensure(max(e.u, e.v) + 1)
        if self.reject is not None and self.reject(e):
            return -1
        i = len(self.edges)
        self.edges.append(e)
        self.adj[e.u].append((e.v, e.w, i))
        self.adj[e.v].append((e.u, e.w, i))
        return i


def dijkstra(neighbours, source: int, target: int):
    """Shortest path in a graph with nonnegative weights.

    ``neighbours(v)`` yields ``(u, w, edge_id)``. Returns ``(weight, vertices,
    edge_ids)``; ties are broken by vertex id. Raises :class:`NoPathError`.
    """
    dist = {source: 0.0}
    prev: dict[int, tuple[int, int]] = {}
    heap = [(0.0, source)]
    done = set()
    while heap:
        d, v = heapq.heappop(heap)
        if v in done:
            continue
        done.add(v)
        if v == target:
            break
        for u, w, eid in neighbours(v):
            if w < 0:
                raise ValueError("negative edge weight")
            nd = d + w
            old = dist.get(u)
            if old is None or nd < old or (nd == old and u not in done and prev.get(u, (math.inf,))[0] > v):
                dist[u] = nd
                prev[u] = (v, eid)
                heapq.heappush(heap, (nd, u))
    if target not in done:
        raise NoPathError(f"vertex {target} is unreachable from {source}")
    verts, eids = [target], []
    while verts[-1] != source:
        v, eid = prev[verts[-1]]
        eids.append(eid)
        verts.append(v)
    return dist[target], verts[::-1], eids[::-1]


# ---------------------------------------------------------------------------
# the structure


class StructureB:
    """Sample points, per-direction trapezoidal maps and the weighted graph."""

    def __init__(self, scene: Scene, epsilon: float | None = None, *, seed: int = 0, bounds=None,
                 ds: DirectionSet | None = None):
        self.scene = scene
        self.epsilon = scene.epsilon if epsilon is None else float(epsilon)
        if not (0.0 < self.epsilon < 1.0):
            raise SceneError(f"epsilon must lie in (0, 1), got {self.epsilon}")
        self.seed = int(seed)
        self.ds = ds if ds is not None else choose_theta(self.epsilon, scene.has_obstacles)
        extra = [] if bounds is None else [tuple(p) for p in np.asarray(bounds, float).reshape(-1, 2)]
        x0, y0, x1, y1 = scene.bbox(extra)
        self.bounds = np.array([[x0, y0], [x1, y1]])
        self.eta = 1e-9 * max(math.hypot(x1 - x0, y1 - y0), 1e-300) if (x1 > x0 or y1 > y0) else 1e-9
        self.points: list[SamplePoint] = []
        self._cell = 4.0 * self.eta
        self._grid: dict[tuple, list[int]] = {}
        self._by_region: dict[int, list[int]] = {r.id: [] for r in scene.regions}
        # obstacles touching along an edge wall off the seam between them
        self.seams = find_seams([r.shape for r in scene.obstacles], 100 * self.eta)
        self.graph = _Graph(self._rejects if self.seams else None)
        self._dist_cache: dict[tuple[int, int], tuple] = {}
        self._block_obs = [r for r in scene.obstacles]
        self._build()

    # -- small helpers ------------------------------------------------------
    @property
    def regions(self):
        return self.scene.regions

    def shape(self, rid: int) -> ConvexShape:
        return self.scene.regions[rid].shape

    def is_obstacle(self, rid) -> bool:
        return rid is not None and 0 <= rid < len(self.regions) and self.regions[rid].is_obstacle

    def is_zero(self, rid) -> bool:
        return rid is not None and 0 <= rid < len(self.regions) and self.regions[rid].is_zero

    @property
    def has_obstacles(self) -> bool:
        return self.scene.has_obstacles

    def region_points(self, rid: int) -> list[SamplePoint]:
        return [self.points[i] for i in self._by_region[rid]]

    def _add_point(self, loc, kind, region, extreme_for=frozenset()) -> int:
        """Register a sample point, merging with an existing one of the same region."""
        loc = np.asarray(loc, float)
        cell = (math.floor(loc[0] / self._cell), math.floor(loc[1] / self._cell))
        if region is not None:
            for dx in (-1, 0, 1):
                for dy in (-1, 0, 1):
                    for i in self._grid.get((region, cell[0] + dx, cell[1] + dy), ()):
                        if math.hypot(*(self.points[i].location - loc)) <= self.eta:
                            return i
        sp = SamplePoint(len(self.points), loc.copy(), kind, region, frozenset(extreme_for))
        self.points.append(sp)
        if region is not None:
            self._by_region[region].append(sp.id)
            self._grid.setdefault((region, *cell), []).append(sp.id)
        return sp.id

    def region_distance(self, a: int, b: int):
        key = (min(a, b), max(a, b))
        if key not in self._dist_cache:
            d, p, q = shape_distance(self.shape(key[0]), self.shape(key[1]), check=False)
            self._dist_cache[key] = (d, p, q)
        d, p, q = self._dist_cache[key]
        return (d, p, q) if a <= b else (d, q, p)

    def segment_blocked(self, p, q) -> bool:
        """Does pq cross the interior of an original obstacle?"""
        p = np.asarray(p, float)
        q = np.asarray(q, float)
        for r in self._block_obs:
            iv = r.shape.clip_segment(p, q, slack=0.0)
            if iv is None:
                continue
            t0, t1 = iv
            L = math.hypot(*(q - p))
            if (t1 - t0) * L <= self.eta:
                continue
            if r.shape.depth(p + 0.5 * (t0 + t1) * (q - p)) > self.eta:
                return True
        return False

    def _rejects(self, e: Edge, loc=None) -> bool:
        """Straight edges may not run along a seam between touching obstacles."""
        if e.kind in ("anchor", "adjacency"):
            return False
        loc = loc or (lambda v: self.points[v].location)
        p, q = e.geom if e.kind == "query" and e.geom is not None else (loc(e.u), loc(e.v))
        return runs_along_seam(p, q, self.seams, 100 * self.eta)

    # -- construction -------------------------------------------------------
    def _build(self) -> None:
        scene, ds = self.scene, self.ds
        for r in scene.regions:
            for sp in original_sample_points(r.shape, ds, r.id, tol=self.eta):
                self._add_point(sp.location, ORIGINAL, r.id, sp.extreme_for)
        self.anchors = {r.id: assign_anchor(self.region_points(r.id)) for r in scene.zero_regions}
        simpl0 = {r.id: simplify(r.shape, self.region_points(r.id), r.id, tol=self.eta) for r in scene.regions}
        self.maps: list = []
        polys = [(rid, s.polygon.vertices, s.point_ids) for rid, s in simpl0.items()]
        self._point_regions = [rid for rid, s in simpl0.items() if s.polygon.n == 1]
        self._adj_pairs: set = set()
        self._wall_keys: dict = {}
        self._tangent_pairs: set = set()
        # the map for r(k + m/2) is the map for r(k) turned upside down, so
        # only the first half is built and scanned (both rays per wall)
        half = ds.m // 2
        for k in range(half):
            tm = TrapMap(polys, ds.angle(k), seed=self.seed * 1000003 + k, eta=self.eta,
                         bounds=self.bounds, k=k)
            self.maps.append(tm)
            self._process_map(tm, k)
        self.maps.extend(MirroredTrapMap(self.maps[k], half + k) for k in range(half))
        # regions reduced to a single point are located like query points
        for rid in self._point_regions:
            loc = self.points[self._by_region[rid][0]].location
            for k in range(half):
                for other, _, _ in self._face_regions(loc, k):
                    if other != rid and self.is_zero(other) and self.is_zero(rid):
                        self._add_adjacency(rid, other)
        self.simplified = {r.id: simplify(r.shape, self.region_points(r.id), r.id, tol=self.eta)
                           for r in scene.regions}
        self.obstacle_set = ObstacleSet([self.simplified[r.id].polygon.vertices for r in scene.obstacles],
                                        tol=self.eta)
        n = len(self.points)
        self.loc = np.array([p.location for p in self.points]).reshape(-1, 2)
        self.region_of = np.array([-1 if p.region is None else p.region for p in self.points], dtype=np.int64)
        self.theta = ThetaGraph(self.loc, self.region_of, ds, self.obstacle_set, tol=self.eta)
        self.graph.ensure(n)
        for i, j, w in self.theta.edges():
            self.graph.add(Edge(i, j, w, "theta"))
        for r in scene.obstacles:
            for a, b in boundary_neighbours(r.shape, self.region_points(r.id)):
                self.graph.add(Edge(a.id, b.id, float(np.hypot(*(a.location - b.location))), "boundary", ccw=True))
        for r in scene.zero_regions:
            ak = self.anchors[r.id]
            for i in self._by_region[r.id]:
                if i != ak:
                    self.graph.add(Edge(i, ak, 0.0, "anchor"))
        self.loc.setflags(write=False)

    def _add_adjacency(self, a: int, b: int) -> None:
        key = (min(a, b), max(a, b))
        if key in self._adj_pairs:
            return
        self._adj_pairs.add(key)
        d, p, q = self.region_distance(key[0], key[1])
        if self.has_obstacles and self.segment_blocked(p, q):
            self._adj_pairs.discard(key)
            return
        self.graph.add(Edge(self.anchors[key[0]], self.anchors[key[1]], d, "adjacency", geom=(p, q)))

    def _emitter_point(self, tm: TrapMap, vid: int, prefer: int | None) -> int:
        keys = tm.vertex_keys[vid]
        for key in keys:
            if self.points[key].region == prefer:
                return key
        return keys[0]

    def _propagated(self, tm: TrapMap, k: int, vid: int, sign: int, region: int, fallback) -> int:
        """Propagated sample point of the ray from vertex ``vid`` landing on ``region``."""
        key = (k, vid, sign)
        if key in self._wall_keys:
            return self._wall_keys[key]
        src = self.points[tm.vertex_keys[vid][0]].location
        u = self.ds.directions[k] * sign
        hit = ray_intersect(src, u, self.shape(region))
        loc = hit[0] if hit is not None else np.asarray(fallback, float)
        pid = self._add_point(loc, PROPAGATED, region)
        self._wall_keys[key] = pid
        return pid

    def _process_map(self, tm: TrapMap, k: int) -> None:
        mixed = self.has_obstacles
        for adj in tm.face_adjacencies():
            A, B = adj.bottom, adj.top
            both_zero = self.is_zero(A) and self.is_zero(B)
            if adj.face is None:
                if both_zero:
                    self._add_adjacency(A, B)
                continue
            if not mixed:
                if both_zero:
                    self._add_adjacency(A, B)
                continue
            # walls of the face: emitter, landing on the bottom and on the top
            ends = []
            for w in adj.walls:
                regs = tm.vertex_regions[w.emitter]
                el = tm.to_local(w.emitter_xy)
                up = tm.to_local(w.top_xy)[1] - el[1] > self.eta
                down = el[1] - tm.to_local(w.bottom_xy)[1] > self.eta
                top_id = (self._propagated(tm, k, w.emitter, 1, B, w.top_xy)
                          if up and B not in regs else self._emitter_point(tm, w.emitter, B))
                bot_id = (self._propagated(tm, k, w.emitter, -1, A, w.bottom_xy)
                          if down and A not in regs else self._emitter_point(tm, w.emitter, A))
                ends.append((bot_id, top_id))
            use_walls = not both_zero
            if both_zero:
                key = (min(A, B), max(A, B))
                self._add_adjacency(A, B)
                use_walls = key not in self._adj_pairs
            if use_walls:
                for a, b in ends:
                    if a != b:
                        pa, pb = self.points[a].location, self.points[b].location
                        self.graph.add(Edge(a, b, float(np.hypot(*(pa - pb))), "wall"))
            if self.is_obstacle(A) and self.is_obstacle(B):
                self._add_tangent_points(A, B)

    def _add_tangent_points(self, A: int, B: int) -> None:
        key = (min(A, B), max(A, B))
        if key in self._tangent_pairs:
            return
        self._tangent_pairs.add(key)
        try:
            tangents = common_tangents(self.shape(key[0]), self.shape(key[1]))
        except GeometryError:
            return
        for t in tangents:
            self._add_point(t.point_on_A, TANGENT, key[0])
            self._add_point(t.point_on_B, TANGENT, key[1])

    def _face_regions(self, z, k: int):
        """Regions below and above ``z`` in map ``k`` with the landing points.

        Yields ``(region, sign, landing_xy)``; falls back to direct ray
        shooting against the simplified regions outside the map frame.
        """
        tm = self.maps[k]
        try:
            f = tm.locate(z)
        except PointInRegionError:
            return []
        except ValueError:
            return self._shoot(z, k)
        below, above = tm.landing(f.id, z)
        out = []
        for region, sign, land in ((f.bottom_region, -1, below), (f.top_region, 1, above)):
            if region is None or region == FRAME:
                continue
            out.append((region, sign, land))
        return out

    def _shoot(self, z, k: int):
        out = []
        for sign in (-1, 1):
            u = self.ds.directions[k] * sign
            best = None
            for rid, s in self.simplified_initial().items():
                if s.polygon.n < 2:
                    continue
                hit = ray_intersect(z, u, s.polygon)
                if hit is not None and (best is None or hit[1] < best[1]):
                    best = (rid, hit[1], hit[0])
            if best is not None:
                out.append((best[0], sign, tuple(best[2])))
        return out

    def simplified_initial(self):
        if not hasattr(self, "_simpl0"):
            self._simpl0 = {r.id: simplify(r.shape, [p for p in self.region_points(r.id) if p.kind == ORIGINAL],
                                           r.id, tol=self.eta) for r in self.scene.regions}
        return self._simpl0

    # -- statistics ---------------------------------------------------------
    @property
    def n_vertices(self) -> int:
        return len(self.points)

    @property
    def n_edges(self) -> int:
        return len(self.graph.edges)

    def edge_counts(self) -> dict:
        out = {k: 0 for k in EDGE_KINDS}
        for e in self.graph.edges:
            out[e.kind] = out.get(e.kind, 0) + 1
        return out

    def point_counts(self) -> dict:
        out = {ORIGINAL: 0, PROPAGATED: 0, TANGENT: 0}
        for p in self.points:
            out[p.kind] = out.get(p.kind, 0) + 1
        return out

    def summary(self) -> dict:
        return {
            "vertices": self.n_vertices,
            "edges": self.n_edges,
            "theta": self.ds.theta,
            "directions": self.ds.m,
            "maps": len(self.maps),
            "edge_counts": self.edge_counts(),
            "point_counts": self.point_counts(),
            "epsilon": self.epsilon,
            "seed": self.seed,
        }

    # -- queries ------------------------------------------------------------
    def query(self, s, t) -> WeightedPath:
        """Approximate minimum-cost path from ``s`` to ``t``."""
        s = _finite_point(s, "source")
        t = _finite_point(t, "target")
        ov = _Overlay(self)
        sid = ov.add_query(s)
        tid = ov.add_query(t)
        if math.hypot(*(s - t)) <= self.eta:
            return WeightedPath(s, t, [], 0.0, [sid, tid], [])
        ov.finish()
        w, verts, eids = dijkstra(ov.neighbours, sid, tid)
        path = _realize(ov, verts, eids, s, t)
        path.graph_weight = float(w)
        return path

    def distance(self, s, t) -> float:
        return self.query(s, t).weight


def _finite_point(p, name) -> np.ndarray:
    try:
        z = np.asarray(p, float).reshape(2)
    except (TypeError, ValueError):
        raise QueryError(f"{name} must be a 2D point") from None
    if not np.all(np.isfinite(z)):
        raise QueryError(f"{name} must have finite coordinates")
    return z


class _Overlay:
    """Per-query extension of the structure graph."""

    def __init__(self, base: StructureB):
        self.base = base
        self.n0 = base.n_vertices
        self.locs: list[np.ndarray] = []
        self.kinds: list[str] = []
        self.regions: list[int | None] = []
        self.theta_regions: list[int] = []
        self.edges: list[Edge] = []
        self.adj: dict[int, list] = {}
        self.container: dict[int, int | None] = {}
        self._nq = 0

    # vertex data
    def loc(self, v: int) -> np.ndarray:
        return self.base.points[v].location if v < self.n0 else self.locs[v - self.n0]

    def region(self, v: int):
        return self.base.points[v].region if v < self.n0 else self.regions[v - self.n0]

    def zone(self, v: int):
        """0-region whose closure holds vertex ``v``, if any."""
        r = self.region(v)
        if r is not None:
            return r if self.base.is_zero(r) else None
        return self.container.get(v)

    def add_edge(self, e: Edge) -> None:
        if self.base.seams and self.base._rejects(e, self.loc):
            return
        i = len(self.base.graph.edges) + len(self.edges)
        self.edges.append(e)
        self.adj.setdefault(e.u, []).append((e.v, e.w, i))
        self.adj.setdefault(e.v, []).append((e.u, e.w, i))

    def edge(self, i: int) -> Edge:
        nb = len(self.base.graph.edges)
        return self.base.graph.edges[i] if i < nb else self.edges[i - nb]

    def neighbours(self, v: int):
        if v < self.n0:
            yield from self.base.graph.adj[v]
        yield from self.adj.get(v, ())

    def new_point(self, loc, kind, region, theta_region) -> int:
        loc = np.asarray(loc, float)
        if region is not None:
            # reuse a point already on this region at the same place
            for i, q in enumerate(self.locs):
                if self.regions[i] == region and math.hypot(*(q - loc)) <= self.base.eta:
                    return self.n0 + i
        self.locs.append(loc.copy())
        self.kinds.append(kind)
        self.regions.append(region)
        self.theta_regions.append(theta_region)
        return self.n0 + len(self.locs) - 1

    # query points
    def add_query(self, z) -> int:
        b = self.base
        for r in b.scene.obstacles:
            if r.shape.strictly_contains(z, tol=b.eta):
                raise QueryError(f"point ({z[0]:.6g}, {z[1]:.6g}) lies inside obstacle {r.id}")
        vr = len(b.regions) + self._nq
        self._nq += 1
        zid = self.new_point(z, QUERY, None, vr)
        self.container[zid] = None
        for r in b.scene.zero_regions:
            if r.shape.contains(z, tol=b.eta):
                self.add_edge(Edge(zid, b.anchors[r.id], 0.0, "query", geom=(z.copy(), z.copy())))
                if self.container[zid] is None:
                    self.container[zid] = r.id
        zero_done: dict[int, bool] = {}
        tangents_done = set()
        for k in range(b.ds.m // 2):
            for region, sign, land in b._face_regions(z, k):
                if region is None or region < 0:
                    continue
                shape = b.shape(region)
                if b.is_zero(region) and region not in zero_done:
                    d, q = point_shape_distance(z, shape)
                    ok = not (b.has_obstacles and b.segment_blocked(z, q))
                    if ok:
                        self.add_edge(Edge(zid, b.anchors[region], d, "query", geom=(z.copy(), q)))
                    zero_done[region] = ok
                if not b.has_obstacles:
                    continue
                if b.is_zero(region) and zero_done[region]:
                    continue
                hit = ray_intersect(z, b.ds.directions[k] * sign, shape)
                ploc = hit[0] if hit is not None else np.asarray(land, float)
                pid = self.new_point(ploc, PROPAGATED, region, region)
                self.add_edge(Edge(zid, pid, float(math.hypot(*(z - ploc))), "wall"))
                if b.is_obstacle(region) and region not in tangents_done:
                    tangents_done.add(region)
                    try:
                        tps = point_tangents(z, shape)
                    except GeometryError:
                        tps = []
                    for tp in tps:
                        self.new_point(tp, TANGENT, region, region)
        return zid

    def finish(self) -> None:
        """Insert the overlay points into the Theta-graph and wire them up."""
        b = self.base
        th = b.theta.copy()
        for i, loc in enumerate(self.locs):
            idx, new = th.insert_point(loc, self.theta_regions[i])
            assert idx == self.n0 + i
            for u, v, w in new:
                self.add_edge(Edge(u, v, w, "theta"))
        touched = {}
        for i, r in enumerate(self.regions):
            if r is None:
                continue
            v = self.n0 + i
            if b.is_zero(r):
                self.add_edge(Edge(v, b.anchors[r], 0.0, "anchor"))
            else:
                touched.setdefault(r, []).append(v)
        for r, vs in touched.items():
            shape = b.shape(r)
            ids = list(b._by_region[r]) + vs
            pts = [SamplePoint(v, self.loc(v), PROPAGATED, r) for v in ids]
            new = set(vs)
            for p, q in boundary_neighbours(shape, pts):
                if p.id in new or q.id in new:
                    self.add_edge(Edge(p.id, q.id, float(math.hypot(*(p.location - q.location))),
                                       "boundary", ccw=True))


# ---------------------------------------------------------------------------
# turning graph paths into geometric paths


def _realize(ov: _Overlay, verts, eids, s, t) -> WeightedPath:
    b = ov.base
    rz = _Realizer(b)
    cur = s.copy()
    zone = ov.zone(verts[0])
    kinds = []
    for i, eid in enumerate(eids):
        u, v = verts[i], verts[i + 1]
        e = ov.edge(eid)
        fwd = e.u == u
        kinds.append(e.kind)
        if e.kind == "anchor":
            pass
        elif e.kind in ("adjacency", "query"):
            p, q = e.geom if fwd else e.geom[::-1]
            cur = rz.connect(cur, p, zone)
            rz.straight(p, q)
            cur = np.asarray(q, float)
        elif e.kind == "boundary":
            a, c = ov.loc(e.u), ov.loc(e.v)
            pts = b.shape(ov.region(e.u)).arc_ccw(a, c)
            if not fwd:
                pts = pts[::-1]
            cur = rz.connect(cur, pts[0], zone)
            rz.add(pts, "boundary", ov.region(e.u), polyline_length(pts))
            cur = np.asarray(pts[-1], float)
        else:
            cur = rz.connect(cur, ov.loc(u), zone)
            rz.straight(ov.loc(u), ov.loc(v))
            cur = ov.loc(v).copy()
        zone = ov.zone(v)
    rz.connect(cur, t, zone)
    return WeightedPath(s.copy(), t.copy(), rz.segments, 0.0, list(verts), kinds)


class _Realizer:
    def __init__(self, b: StructureB):
        self.b = b
        self.segments: list[PathSegment] = []
        self.boxes = np.array([r.shape.bbox for r in b.regions]).reshape(-1, 4)

    def add(self, pts, medium, region, cost) -> None:
        pts = np.asarray(pts, float)
        if len(pts) < 2 or polyline_length(pts) <= self.b.eta:
            return
        self.segments.append(PathSegment(pts, medium, region, float(cost)))

    def connect(self, cur, p, zone):
        """Move from ``cur`` to ``p`` inside the 0-region ``zone`` when possible."""
        p = np.asarray(p, float)
        if math.hypot(*(cur - p)) <= self.b.eta:
            return p
        if zone is not None:
            sh = self.b.shape(zone)
            tol = 1e3 * self.b.eta
            if sh.contains(cur, tol=tol) and sh.contains(p, tol=tol):
                self.add([cur, p], "zero", zone, 0.0)
                return p
        log.debug("connector outside a 0-region from %s to %s", cur, p)
        self.straight(cur, p)
        return p

    def straight(self, p, q) -> None:
        """Segment pq with 0-region parts free and obstacle parts detoured."""
        b = self.b
        p = np.asarray(p, float)
        q = np.asarray(q, float)
        L = math.hypot(*(q - p))
        if L <= b.eta:
            return
        lo = np.minimum(p, q)
        hi = np.maximum(p, q)
        bx = self.boxes
        cand = np.flatnonzero((bx[:, 0] <= hi[0] + b.eta) & (bx[:, 2] >= lo[0] - b.eta)
                              & (bx[:, 1] <= hi[1] + b.eta) & (bx[:, 3] >= lo[1] - b.eta)) if len(bx) else []
        ivs = []
        for rid in cand:
            r = b.regions[int(rid)]
            iv = r.shape.clip_segment(p, q, slack=0.0)
            if iv is None or (iv[1] - iv[0]) * L <= b.eta:
                continue
            if r.is_obstacle:
                mid = p + 0.5 * (iv[0] + iv[1]) * (q - p)
                if r.shape.depth(mid) <= b.eta:
                    continue
            ivs.append((iv[0], iv[1], r))
        ivs.sort(key=lambda x: x[0])
        t = 0.0
        for t0, t1, r in ivs:
            t0 = max(t0, t)
            if t1 <= t0:
                continue
            a = p + t0 * (q - p)
            c = p + t1 * (q - p)
            if t0 > t:
                x = p + t * (q - p)
                self.add([x, a], "plane", None, math.hypot(*(a - x)))
            if r.is_zero:
                self.add([a, c], "zero", r.id, 0.0)
            else:
                pts, length = shorter_arc(r.shape, a, c)
                self.add(pts, "boundary", r.id, length)
            t = t1
        if t < 1.0:
            x = p + t * (q - p)
            self.add([x, q], "plane", None, math.hypot(*(q - x)))
