import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from zospan import Scene
from zospan.geom import EllipseRectShape, PolygonShape
from zospan.oracle import (dense_obstacle_sp, exact_zero_region_sp, verify_lemma8,
                           verify_lemma10, verify_lemma15)
from zospan.sampling import choose_theta
from zospan.scene import OBSTACLE, ZERO
from zospan.testing import random_convex_polygon, random_scene


def rect(x0, y0, x1, y1):
    return PolygonShape([(x0, y0), (x1, y0), (x1, y1), (x0, y1)])


CIRCLE_GEODESIC = 2 * math.sqrt(8) + 2 * math.asin(1 / 3)


def test_exact_no_regions():
    assert exact_zero_region_sp(Scene([], 0.5), (0, 0), (3, 4)).value == pytest.approx(5)


def test_exact_inside_one_region():
    sc = Scene([(rect(0, 0, 4, 4), ZERO)], 0.5)
    assert exact_zero_region_sp(sc, (1, 1), (3, 2)).value == 0.0


def test_exact_collinear_squares_sum_gaps():
    sc = Scene([(rect(0, 0, 1, 1), ZERO), (rect(3, 0, 4, 1), ZERO), (rect(4.5, 0, 6, 1), ZERO)], 0.5)
    rep = exact_zero_region_sp(sc, (0.5, 0.5), (5.5, 0.5))
    assert rep.value == pytest.approx(2.5)
    assert rep.error_bound == 0.0


def test_exact_is_symmetric(rng):
    sc = random_scene(rng, 5, 0)
    for _ in range(5):
        s, t = rng.uniform(0, 10, 2), rng.uniform(0, 10, 2)
        assert exact_zero_region_sp(sc, s, t).value == pytest.approx(exact_zero_region_sp(sc, t, s).value)


@settings(max_examples=10)
@given(st.integers(0, 10**6))
def test_dense_matches_exact_without_obstacles(seed):
    rng = np.random.default_rng(seed)
    sc = random_scene(rng, int(rng.integers(1, 5)), 0)
    s, t = rng.uniform(-1, 11, 2), rng.uniform(-1, 11, 2)
    assert dense_obstacle_sp(sc, s, t, K=50).value == pytest.approx(
        exact_zero_region_sp(sc, s, t).value, abs=1e-9)


def test_dense_square_obstacle_exact():
    sc = Scene([(rect(-1, -1, 1, 1), OBSTACLE)], 0.5)
    rep = dense_obstacle_sp(sc, (-3, 0), (3, 0))
    assert rep.value == pytest.approx(2 * math.sqrt(5) + 2, abs=1e-12)
    assert rep.error_bound == 0.0


def test_dense_circle_against_analytic_geodesic():
    sc = Scene([(EllipseRectShape.circle(0, 0, 1), OBSTACLE)], 0.5)
    rep = dense_obstacle_sp(sc, (-3, 0), (3, 0), K=200)
    assert abs(rep.value - CIRCLE_GEODESIC) <= rep.error_bound
    assert rep.value >= CIRCLE_GEODESIC - 1e-7


def test_dense_converges_with_K():
    sc = Scene([(EllipseRectShape.circle(0, 0, 1), OBSTACLE)], 0.5)
    reps = [dense_obstacle_sp(sc, (-3, 0.2), (3, -0.1), K=K) for K in (50, 200)]
    assert reps[1].error_bound < reps[0].error_bound
    assert reps[1].value <= reps[0].value + 1e-6


def test_dense_rejects_small_K():
    with pytest.raises(ValueError):
        dense_obstacle_sp(Scene([], 0.5), (0, 0), (1, 1), K=10)


def test_dense_rejects_point_in_obstacle():
    with pytest.raises(ValueError):
        dense_obstacle_sp(Scene([(rect(0, 0, 1, 1), OBSTACLE)], 0.5), (0.5, 0.5), (3, 3))


def test_dense_witness_ends_at_query():
    sc = Scene([(rect(-1, -1, 1, 1), OBSTACLE)], 0.5)
    w = dense_obstacle_sp(sc, (-3, 0), (3, 0)).witness
    assert np.allclose(w[0], (-3, 0)) and np.allclose(w[-1], (3, 0))


# -- geometric identities ------------------------------------------------

def _sweep(n=100):
    rng = np.random.default_rng(0)
    for _ in range(n):
        theta = rng.uniform(0.01, math.pi / 6 - 1e-3)
        yield rng.uniform(1e-4, 1 - 1e-4) * theta, theta


def test_rotated_segment_identities():
    worst = max(max(verify_lemma8(a, th)) for a, th in _sweep())
    assert worst < 1e-9


def test_two_sided_identities():
    worst = max(max(verify_lemma10(a, th)) for a, th in _sweep())
    assert worst < 1e-9


def test_identities_scale_and_rotate():
    for k in (0, 3, 11):
        for L in (0.01, 1.0, 250.0):
            assert max(verify_lemma8(0.1, 0.3, L, k)) < 1e-9 * L + 1e-12
            assert max(verify_lemma10(0.1, 0.3, L, k)) < 1e-9 * L + 1e-12


def test_identity_at_half_angle():
    th = math.pi / 8
    r8 = verify_lemma8(th / 2, th)
    r10 = verify_lemma10(th / 2, th)
    assert max(r8 + r10) < 1e-12


def test_identity_small_alpha_limit():
    # as alpha -> 0 the rotated endpoint approaches q
    r1, r2 = verify_lemma8(1e-9, 0.3)
    assert r1 < 1e-12 and r2 < 1e-12


def test_identity_domain():
    with pytest.raises(ValueError):
        verify_lemma8(0.3, 0.2)
    with pytest.raises(ValueError):
        verify_lemma10(0.1, math.pi / 4)


@pytest.mark.parametrize("eps", [0.5, 0.25])
def test_arc_chord_ratio_on_shapes(eps):
    rng = np.random.default_rng(3)
    ds = choose_theta(eps, True)
    bound = 1 / math.cos(ds.theta / 2) + 1e-9
    shapes = [random_convex_polygon(rng, (0, 0), 2.0) for _ in range(3)]
    shapes.append(EllipseRectShape.circle(0, 0, 1))
    for sh in shapes:
        assert 1.0 <= verify_lemma15(sh, ds) <= bound
