import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from zospan.geom import (EllipseRectShape, GeometryError, PolygonShape, boundary_arc, common_tangents,
                         direction, point_shape_distance, point_tangents, ray_intersect,
                         segment_segment_distance, shape_distance, support_point)
from zospan.testing import random_convex_polygon

SQUARE = PolygonShape([(0, 0), (1, 0), (1, 1), (0, 1)])
seeds = st.integers(0, 10**6)


def poly(seed, center=(0, 0), radius=1.0):
    return random_convex_polygon(np.random.default_rng(seed), center, radius)


def ellipse(seed, center=(0, 0)):
    r = np.random.default_rng(seed)
    return EllipseRectShape.from_ellipse(center[0], center[1], r.uniform(0.4, 1.0), r.uniform(0.4, 1.0),
                                         r.uniform(0, math.pi))


def shapes(seed, center=(0, 0)):
    return poly(seed, center) if seed % 2 else ellipse(seed, center)


def boundary_samples(S, n=1000):
    if isinstance(S, PolygonShape):
        V = S.vertices
        t = np.linspace(0, 1, n // len(V), endpoint=False)[:, None]
        return np.vstack([a + t * (b - a) for a, b in zip(V, np.roll(V, -1, axis=0))])
    return np.array([S.boundary_point(x) for x in np.linspace(0, 2 * math.pi, n, endpoint=False)])


def brute_distance(A, B):
    best = math.inf
    for a0, a1 in A.edges():
        for b0, b1 in B.edges():
            best = min(best, segment_segment_distance(a0, a1, b0, b1)[0])
    return best


# -- support ---------------------------------------------------------------

def test_support_square_edge():
    pts = support_point(SQUARE, (0, 1))
    assert sorted(map(tuple, np.round(pts, 12))) == [(0.0, 1.0), (1.0, 1.0)]


def test_support_circle():
    c = EllipseRectShape.from_ellipse(0, 0, 1, 1, 0, -100, 100, -100, 100)
    (p,) = support_point(c, (1, 0))
    assert np.allclose(p, (1, 0), atol=1e-12)


@given(seeds, st.floats(0, 2 * math.pi))
def test_support_polygon_matches_vertex_scan(seed, a):
    P = poly(seed)
    u = direction(a)
    best = np.max(P.vertices @ u)
    for p in support_point(P, u):
        assert p @ u == pytest.approx(best, abs=1e-12)


@given(seeds, st.floats(0, 2 * math.pi))
def test_support_dominates_boundary(seed, a):
    S = shapes(seed)
    u = direction(a)
    top = max(p @ u for p in support_point(S, u))
    B = boundary_samples(S)
    assert np.all(B @ u <= top + 1e-9)


# -- rays ----------------------------------------------------------------

def test_ray_hits_square():
    p, t = ray_intersect((0.5, -2), (0, 1), SQUARE)
    assert np.allclose(p, (0.5, 0)) and t == pytest.approx(2)


def test_ray_misses():
    assert ray_intersect((5, -2), (0, 1), SQUARE) is None


def test_ray_grazing_corner_counts():
    hit = ray_intersect((0, -2), (0, 1), SQUARE)
    assert hit is not None and np.allclose(hit[0], (0, 0))


@settings(max_examples=10)
@given(seeds, st.floats(0, 2 * math.pi))
def test_ray_ellipse_matches_fine_polygon(seed, a):
    E = ellipse(seed)
    fine = PolygonShape(np.array([E.boundary_point(x) for x in np.linspace(0, 2 * math.pi, 10000,
                                                                          endpoint=False)]))
    o = 4 * direction(a)
    u = direction(a + math.pi + 0.2 * math.sin(seed))
    h1, h2 = ray_intersect(o, u, E), ray_intersect(o, u, fine)
    assert (h1 is None) == (h2 is None)
    if h1 is not None:
        assert np.allclose(h1[0], h2[0], atol=1e-6 * E.diameter * 10)


# -- distances ----------------------------------------------------------------

def test_square_distance():
    B = PolygonShape([(3, 0), (4, 0), (4, 1), (3, 1)])
    d, p, q = shape_distance(SQUARE, B)
    assert d == pytest.approx(2)
    assert p[0] == pytest.approx(1) and q[0] == pytest.approx(3) and p[1] == pytest.approx(q[1])


def test_touching_distance_zero():
    B = PolygonShape([(1, 0), (2, 0), (2, 1), (1, 1)])
    assert shape_distance(SQUARE, B)[0] == pytest.approx(0, abs=1e-12)


def test_overlap_rejected():
    B = PolygonShape([(0.5, 0.5), (2, 0.5), (2, 2), (0.5, 2)])
    with pytest.raises(GeometryError):
        shape_distance(SQUARE, B)


@given(seeds, seeds, st.floats(2.1, 5), st.floats(0, 2 * math.pi))
def test_distance_matches_brute_force(s1, s2, gap, a):
    A = poly(s1)
    B = poly(s2, center=gap * direction(a))
    d, p, q = shape_distance(A, B)
    assert d == pytest.approx(brute_distance(A, B), abs=1e-9)
    assert shape_distance(B, A)[0] == pytest.approx(d, abs=1e-9)
    # closest pair is perpendicular to supporting lines at both ends
    n = (q - p) / d
    assert np.max(A.vertices @ n) <= p @ n + 1e-9
    assert np.min(B.vertices @ n) >= q @ n - 1e-9


@given(seeds, seeds, st.floats(2.5, 5), st.floats(0, 2 * math.pi))
def test_curved_distance_perpendicular(s1, s2, gap, a):
    A, B = shapes(s1), shapes(s2, center=gap * direction(a))
    d, p, q = shape_distance(A, B)
    if d < 1e-9:
        return
    n = (q - p) / d
    assert A.support_value(n) <= p @ n + 1e-7
    assert -B.support_value(-n) >= q @ n - 1e-7


def test_point_distance():
    assert point_shape_distance((0, 0), PolygonShape([(1, 0), (2, 0), (2, 1), (1, 1)]))[0] == pytest.approx(1)
    assert point_shape_distance((0.5, 0.5), SQUARE)[0] == 0.0


@given(seeds, st.floats(1.5, 4), st.floats(0, 2 * math.pi))
def test_point_distance_brute(seed, r, a):
    P = poly(seed)
    p = r * direction(a)
    d, _ = point_shape_distance(p, P)
    brute = min(segment_segment_distance(a0, a1, p, p)[0] for a0, a1 in P.edges())
    assert d == pytest.approx(brute, abs=1e-9)


# -- tangents -----------------------------------------------------------------

def _side(a, b, pts):
    d = b - a
    return (d[0] * (pts[:, 1] - a[1]) - d[1] * (pts[:, 0] - a[0])) / math.hypot(*d)


def _on_one_side(a, b, pts, tol):
    s = _side(a, b, pts)
    return np.all(s >= -tol) or np.all(s <= tol)


def test_circle_outer_tangents():
    A, B = EllipseRectShape.circle(0, 0, 1), EllipseRectShape.circle(4, 0, 1)
    tps = common_tangents(A, B)
    outer = {(round(t.point_on_A[0], 6), round(t.point_on_A[1], 6), round(t.point_on_B[0], 6),
              round(t.point_on_B[1], 6)) for t in tps if t.kind == "outer"}
    assert outer == {(0.0, 1.0, 4.0, 1.0), (0.0, -1.0, 4.0, -1.0)}
    assert len(tps) == 4


def test_touching_has_no_inner_tangents():
    B = PolygonShape([(1, 0), (2, 0), (2, 1), (1, 1)])
    assert all(t.kind == "outer" for t in common_tangents(SQUARE, B))


@given(seeds, seeds, st.floats(2.5, 5), st.floats(0, 2 * math.pi))
def test_common_tangents_support_both(s1, s2, gap, a):
    A, B = shapes(s1), shapes(s2, center=gap * direction(a))
    tps = common_tangents(A, B)
    assert sum(t.kind == "outer" for t in tps) == 2
    assert sum(t.kind == "inner" for t in tps) == 2
    for t in tps:
        a, b = t.point_on_A, t.point_on_B
        sa, sb = _side(a, b, boundary_samples(A)), _side(a, b, boundary_samples(B))
        assert min(sa.max(), -sa.min()) <= 1e-6 and min(sb.max(), -sb.min()) <= 1e-6
        # outer tangents keep both shapes on one side, inner ones separate them
        same = (sa.max() <= 1e-6) == (sb.max() <= 1e-6)
        assert same == (t.kind == "outer")


def test_point_tangents_circle():
    C = EllipseRectShape.circle(2, 0, 1)
    got = sorted(map(tuple, np.round(point_tangents((0, 0), C), 6)))
    assert got == [(1.5, round(-math.sqrt(3) / 2, 6)), (1.5, round(math.sqrt(3) / 2, 6))]


def test_point_tangents_inside_raises():
    with pytest.raises(GeometryError):
        point_tangents((0.5, 0.5), SQUARE)


def test_point_tangents_on_boundary():
    got = sorted(map(tuple, np.round(point_tangents((0.5, 0), SQUARE), 12)))
    assert got == [(0.0, 0.0), (1.0, 0.0)]


@given(seeds, st.floats(1.5, 4), st.floats(0, 2 * math.pi))
def test_point_tangents_support(seed, r, a):
    S = shapes(seed)
    p = (r + 1) * direction(a)
    tps = point_tangents(p, S)
    assert len(tps) == 2
    for q in tps:
        assert _on_one_side(p, q, boundary_samples(S), 1e-6)


# -- arcs ---------------------------------------------------------------

def test_square_arc():
    pts, L = boundary_arc(SQUARE, (0, 0), (1, 1))
    assert np.allclose(pts, [(0, 0), (1, 0), (1, 1)]) and L == pytest.approx(2)
    assert boundary_arc(SQUARE, (0, 0), (0, 0))[1] == 0.0


def test_circle_quarter_arc():
    C = EllipseRectShape.circle(0, 0, 1)
    _, L = boundary_arc(C, (1, 0), (0, 1))
    assert L == pytest.approx(math.pi / 2, abs=1e-6)


@settings(max_examples=10)
@given(seeds, st.floats(0, 2 * math.pi), st.floats(0, 2 * math.pi))
def test_arcs_sum_to_perimeter(seed, a, b):
    S = shapes(seed)
    pa, pb = S.support(direction(a))[0], S.support(direction(b))[0]
    l1 = boundary_arc(S, pa, pb)[1]
    l2 = boundary_arc(S, pb, pa)[1]
    if np.hypot(*(pa - pb)) < 1e-9:
        return
    assert l1 + l2 == pytest.approx(S.perimeter, rel=1e-6)


# -- free-space style cells -----------------------------------------------------

def test_slab_cell_is_degenerate_when_touching():
    # |(x - y, -1)|^2 <= 1 on the unit cell: only the diagonal
    shape = EllipseRectShape([[1, -1], [-1, 1]], [0, 0], 0.0, (0, 1, 0, 1))
    assert shape.classify() == "degenerate"
    assert np.allclose(sorted(map(tuple, shape.degenerate_set())), [(0, 0), (1, 1)])


def test_empty_cell():
    shape = EllipseRectShape([[1, -1], [-1, 1]], [0, 0], 0.75, (0, 1, 0, 1))
    assert shape.classify() == "empty"
