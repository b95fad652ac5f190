import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import bellman_ford

from zospan import NoPathError, QueryError, Scene, SceneError, build
from zospan.engine import _Graph, Edge, dijkstra
from zospan.geom import EllipseRectShape, PolygonShape, polyline_length
from zospan.oracle import exact_zero_region_sp, path_violations
from zospan.scene import OBSTACLE, ZERO
from zospan.testing import random_free_point, random_scene


def rect(x0, y0, x1, y1):
    return PolygonShape([(x0, y0), (x1, y0), (x1, y1), (x0, y1)])


# -- build -------------------------------------------------------------------

def test_empty_scene():
    B = build(Scene([], 0.5))
    assert B.n_vertices == 0 and B.n_edges == 0


def test_single_square_is_anchor_star():
    B = build(Scene([(rect(0, 0, 1, 1), ZERO)], 0.5))
    assert B.n_vertices == 4
    assert B.edge_counts()["anchor"] == 3 and B.n_edges == 3


def test_two_squares_one_adjacency():
    B = build(Scene([(rect(0, 0, 1, 1), ZERO), (rect(3, 0, 4, 1), ZERO)], 0.5))
    counts = B.edge_counts()
    assert counts["adjacency"] == 1 and counts["anchor"] == 6 and counts["wall"] == 0
    (adj,) = [e for e in B.graph.edges if e.kind == "adjacency"]
    assert adj.w == pytest.approx(2.0)
    assert counts["theta"] > 0


def test_bad_epsilon():
    with pytest.raises(SceneError):
        build(Scene([], 0.5), 1.5)


def test_anchors_are_stable():
    scene = random_scene(np.random.default_rng(4), 4, 2)
    assert build(scene).anchors == build(scene).anchors


def test_propagated_points_on_obstacle_top():
    # the 0-region's bottom corners shoot straight down onto the obstacle
    scene = Scene([(rect(0, 3, 1, 4), ZERO), (rect(-2, 0, 3, 1), OBSTACLE)], 0.5)
    B = build(scene)
    prop = [p.location for p in B.points if p.kind == "propagated" and p.region == 1]
    assert any(np.allclose(p, (0, 1)) for p in prop)
    assert any(np.allclose(p, (1, 1)) for p in prop)
    for p in prop:
        assert abs(scene.regions[1].shape.depth(p)) <= 1e-7


# -- queries -----------------------------------------------------------------

def test_empty_scene_straight_line():
    p = build(Scene([], 0.5)).query((0, 0), (3, 4))
    assert p.weight == pytest.approx(5)
    assert [s.medium for s in p.segments] == ["plane"]


def test_same_region_is_free():
    B = build(Scene([(rect(0, 0, 2, 2), ZERO)], 0.5))
    assert B.query((0.5, 0.5), (1.5, 1.7)).weight == 0.0


def test_identical_endpoints():
    B = build(random_scene(np.random.default_rng(1), 2, 2))
    assert B.query((-0.5, -0.5), (-0.5, -0.5)).weight == 0.0


def test_inside_obstacle_rejected():
    B = build(Scene([(rect(0, 0, 1, 1), OBSTACLE)], 0.5))
    with pytest.raises(QueryError):
        B.query((0.5, 0.5), (3, 3))


def test_enclosed_target_has_no_path():
    ring = [rect(0, 0, 3, 1), rect(0, 2, 3, 3), rect(0, 1, 1, 2), rect(2, 1, 3, 2)]
    B = build(Scene([(r, OBSTACLE) for r in ring], 0.5))
    with pytest.raises(NoPathError):
        B.query((-2, -2), (1.5, 1.5))
    assert B.query((1.2, 1.2), (1.8, 1.8)).weight == pytest.approx(math.hypot(0.6, 0.6))


def test_detour_around_square():
    B = build(Scene([(rect(-1, -1, 1, 1), OBSTACLE)], 0.25))
    p = B.query((-3, 0), (3, 0))
    exact = 2 * math.sqrt(5) + 2
    assert exact - 1e-9 <= p.weight <= 1.25 * exact
    assert path_violations(B.scene, p) == []


def test_circle_chord_realized_as_arc():
    C = EllipseRectShape.circle(0, 0, 1)
    B = build(Scene([(C, OBSTACLE)], 0.25))
    p = B.query((-3, 0), (3, 0))
    # tangent-arc-tangent geodesic
    exact = 2 * math.sqrt(8) + 2 * math.asin(1 / 3)
    assert exact - 1e-6 <= p.weight <= 1.25 * exact
    theta = B.ds.theta
    for seg in p.segments:
        if seg.medium == "boundary":
            chord = np.hypot(*(seg.points[-1] - seg.points[0]))
            assert seg.length <= chord / math.cos(theta / 2) + 1e-9
    assert path_violations(B.scene, p) == []


@settings(max_examples=12)
@given(st.integers(0, 10**6), st.sampled_from([0.5, 0.2]))
def test_zero_region_sandwich(seed, eps):
    rng = np.random.default_rng(seed)
    scene = random_scene(rng, int(rng.integers(1, 7)), epsilon=eps)
    B = build(scene, eps)
    for _ in range(3):
        s, t = rng.uniform(-1, 11, 2), rng.uniform(-1, 11, 2)
        p = B.query(s, t)
        lo = exact_zero_region_sp(scene, s, t).value
        assert lo - 1e-9 <= p.weight <= (1 + eps) * lo + 1e-9
        assert abs(p.weight - sum(seg.cost for seg in p.segments)) <= 1e-9
        assert path_violations(scene, p) == []


@settings(max_examples=8)
@given(st.integers(0, 10**6))
def test_mixed_paths_are_valid(seed):
    rng = np.random.default_rng(seed)
    scene = random_scene(rng, int(rng.integers(0, 4)), int(rng.integers(1, 4)), epsilon=0.5, curved=0.3)
    B = build(scene)
    for _ in range(3):
        s, t = random_free_point(rng, scene), random_free_point(rng, scene)
        p = B.query(s, t)
        assert p.weight >= math.hypot(*(s - t)) * 0 - 1e-12
        assert path_violations(scene, p) == []
        segs = p.segments
        for a, b in zip(segs, segs[1:]):
            assert np.allclose(a.points[-1], b.points[0], atol=1e-7)


def test_queries_do_not_mutate():
    rng = np.random.default_rng(8)
    scene = random_scene(rng, 3, 2)
    B = build(scene)
    n, m = B.n_vertices, B.n_edges
    q = [(random_free_point(rng, scene), random_free_point(rng, scene)) for _ in range(3)]
    first = [B.query(s, t).weight for s, t in q]
    assert (B.n_vertices, B.n_edges) == (n, m)
    again = [B.query(s, t).weight for s, t in reversed(q)][::-1]
    assert first == again


def test_plane_only_path_keeps_weight():
    B = build(Scene([(rect(0, 0, 1, 1), OBSTACLE)], 0.5))
    p = B.query((2, 0), (2, 5))
    assert p.weight == pytest.approx(5) and p.graph_weight == pytest.approx(5)


def test_edge_inside_zero_region_is_free():
    B = build(Scene([(rect(0, 0, 10, 1), ZERO)], 0.5))
    p = B.query((-1, 0.5), (11, 0.5))
    assert p.weight == pytest.approx(2.0)


# -- dijkstra ---------------------------------------------------------------

def _graph(n, edges):
    g = _Graph()
    g.ensure(n)
    for u, v, w in edges:
        g.add(Edge(u, v, w, "theta"))
    return g


def test_dijkstra_single_edge():
    g = _graph(2, [(0, 1, 2.5)])
    assert dijkstra(lambda v: g.adj[v], 0, 1) == (2.5, [0, 1], [0])


def test_dijkstra_zero_cycle():
    g = _graph(3, [(0, 1, 0.0), (1, 2, 0.0), (2, 0, 0.0)])
    assert dijkstra(lambda v: g.adj[v], 0, 2)[0] == 0.0


def test_dijkstra_disconnected():
    g = _graph(3, [(0, 1, 1.0)])
    with pytest.raises(NoPathError):
        dijkstra(lambda v: g.adj[v], 0, 2)


@given(st.integers(0, 10**6))
def test_dijkstra_matches_bellman_ford(seed):
    rng = np.random.default_rng(seed)
    n = 30
    m = 80
    u, v = rng.integers(0, n, m), rng.integers(0, n, m)
    w = rng.uniform(0, 5, m).round(2)
    keep = u != v
    edges = list(zip(u[keep].tolist(), v[keep].tolist(), w[keep].tolist()))
    g = _graph(n, edges)
    dense = np.full((n, n), np.inf)
    for a, b, c in edges:
        dense[a, b] = dense[b, a] = min(dense[a, b], c + 1e-300)
    dense[~np.isfinite(dense)] = 0.0
    M = csr_matrix(dense)
    ref = bellman_ford(M, indices=0)
    for t in range(1, n):
        if np.isfinite(ref[t]):
            d, verts, _ = dijkstra(lambda x: g.adj[x], 0, t)
            assert d == pytest.approx(ref[t], abs=1e-9)
            assert verts[0] == 0 and verts[-1] == t
        else:
            with pytest.raises(NoPathError):
                dijkstra(lambda x: g.adj[x], 0, t)
