import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import shortest_path

from zospan.geom import PolygonShape, segment_hits_interior
from zospan.oracle import naive_theta
from zospan.sampling import choose_theta
from zospan.theta import build_theta, spanning_ratio_bound


def stretch(P, edges):
    n = len(P)
    r = [i for i, j, _ in edges] + [j for i, j, _ in edges]
    c = [j for i, j, _ in edges] + [i for i, j, _ in edges]
    w = [x for *_, x in edges] * 2
    D = shortest_path(coo_matrix((w, (r, c)), shape=(n, n)).tocsr(), directed=False)
    E = np.hypot(*(P[:, None, :] - P[None, :, :]).transpose(2, 0, 1))
    off = ~np.eye(n, dtype=bool)
    return float(np.max(D[off] / E[off]))


def test_two_points_one_edge():
    g = build_theta([(0, 0), (1, 0.3)], choose_theta(0.5))
    assert len(g.edges()) == 1


def test_ratio_formula():
    th = math.pi / 8
    assert spanning_ratio_bound(th) == pytest.approx(
        1 + 2 * math.sin(th / 2) / (math.cos(th / 2) - math.sin(th / 2)))


def test_circle_points_spanner():
    ds = choose_theta(0.5)
    a = np.linspace(0, 2 * math.pi, 40, endpoint=False)
    P = np.column_stack([np.cos(a), np.sin(a)])
    g = build_theta(P, ds)
    assert stretch(P, g.edges()) <= spanning_ratio_bound(ds.theta) + 1e-9


@settings(max_examples=10)
@given(st.integers(0, 10**6), st.sampled_from([0.5, 0.25]))
def test_random_spanner(seed, eps):
    ds = choose_theta(eps)
    P = np.random.default_rng(seed).uniform(0, 10, (120, 2))
    g = build_theta(P, ds)
    assert stretch(P, g.edges()) <= spanning_ratio_bound(ds.theta) + 1e-9
    assert len(g.edges()) <= ds.m * len(P)


@settings(max_examples=15)
@given(st.integers(0, 10**6), st.booleans())
def test_matches_brute_force(seed, with_obstacle):
    rng = np.random.default_rng(seed)
    ds = choose_theta(0.5, with_obstacle)
    P = rng.uniform(0, 10, (60, 2))
    obs = [np.array([(4, 4), (6, 4), (6, 6), (4, 6)], float)] if with_obstacle else []
    if obs:
        P = P[~((P[:, 0] > 4) & (P[:, 0] < 6) & (P[:, 1] > 4) & (P[:, 1] < 6))]
    g = build_theta(P, ds, obstacles=obs)
    assert np.array_equal(g.nearest, naive_theta(P, ds, obs))
    # targets lie in their cones
    for i, c in zip(*np.nonzero(g.nearest >= 0)):
        d = P[g.nearest[i, c]] - P[i]
        ang = math.atan2(d[1], d[0]) % (2 * math.pi)
        assert c * ds.theta - 1e-9 <= ang <= (c + 1) * ds.theta + 1e-9


def test_obstacle_blocks_direct_edge():
    ds = choose_theta(0.5, True)
    sq = np.array([(-1, -1), (1, -1), (1, 1), (-1, 1)], float)
    P = np.array([(-3, 0), (3, 0)] + [tuple(v * 1.0) for v in sq])
    regions = [0, 1, 2, 2, 2, 2]
    g = build_theta(P, ds, obstacles=[sq], regions=regions)
    pairs = {(min(i, j), max(i, j)) for i, j, _ in g.edges()}
    assert (0, 1) not in pairs
    n = len(P)
    edges = g.edges() + [(2, 3, 2.0), (3, 4, 2.0), (4, 5, 2.0), (5, 2, 2.0)]
    r = [e[0] for e in edges]
    c = [e[1] for e in edges]
    D = shortest_path(coo_matrix(([e[2] for e in edges], (r, c)), shape=(n, n)).tocsr(), directed=False)
    assert np.isfinite(D[0, 1])
    # shortest route around the square is 2*(sqrt(5)) + 2
    assert D[0, 1] >= 2 * math.sqrt(5) + 2 - 1e-9
    square = PolygonShape(sq)
    for i, j, _ in g.edges():
        assert not segment_hits_interior(P[i], P[j], square, 1e-9)


def test_insert_into_empty():
    g = build_theta(np.zeros((0, 2)), choose_theta(0.5))
    _, new = g.insert_point((1, 1), 0)
    assert new == []


@settings(max_examples=15)
@given(st.integers(0, 10**6))
def test_insert_covers_rebuild(seed):
    rng = np.random.default_rng(seed)
    ds = choose_theta(0.5)
    P = rng.uniform(0, 10, (50, 2))
    p = rng.uniform(0, 10, 2)
    g = build_theta(P, ds)
    n, new = g.insert_point(p, 50)
    full = build_theta(np.vstack([P, p]), ds)
    want = {(min(i, j), max(i, j)) for i, j, _ in full.edges() if n in (i, j)}
    got = {(min(i, j), max(i, j)) for i, j, _ in new}
    assert want <= got
    # every extra edge is a cone-nearest link in one direction
    for i, j in got - want:
        other = i if j == n else j
        assert full.nearest[other].tolist().count(n) or full.nearest[n].tolist().count(other)


def test_insert_duplicate_location():
    g = build_theta([(0, 0), (1, 0)], choose_theta(0.5), regions=[0, 1])
    _, new = g.insert_point((1, 0), 1)
    assert all(w > 0 for *_, w in new)
