import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from zospan import GeometryError, PolyCurve, build_free_space, minex, weak_frechet_decide
from zospan.oracle import grid_minex, weak_frechet_reachable

PI = [(0, 0), (1, 0)]
SIGMA = [(0, 1), (1, 1)]


def random_curve(rng, n):
    return PolyCurve(np.cumsum(rng.uniform(-1, 1, (n, 2)), axis=0))


curves = st.integers(0, 10**6).map(lambda s: np.random.default_rng(s))


def test_curve_basics():
    c = PolyCurve([(0, 0), (3, 0), (3, 4)])
    assert c.length == 7 and c.n_segments == 2
    assert np.allclose(c(5), (3, 2))
    assert np.allclose(c(-1), (0, 0)) and np.allclose(c(10), (3, 4))


@pytest.mark.parametrize("bad", [[(0, 0)], [(0, 0), (0, 0)], [(0, 0), (np.nan, 1)], [1, 2, 3]])
def test_curve_rejects(bad):
    with pytest.raises(GeometryError):
        PolyCurve(bad)


def test_curve_load(tmp_path):
    f = tmp_path / "c.txt"
    f.write_text("# header\n0 0\n1 2  # tail\n\n3 4\n")
    assert PolyCurve.load(f).n_segments == 2
    f.write_text("0 0\n1 x\n")
    with pytest.raises(GeometryError):
        PolyCurve.load(f)
    f.write_text("0 0 0\n")
    with pytest.raises(GeometryError):
        PolyCurve.load(f)


def test_identical_curves_diagonal_free():
    c = PolyCurve([(0, 0), (1, 0), (1, 1), (2, 1)])
    fsd = build_free_space(c, c, 0.1)
    for i in range(3):
        assert fsd.cell(i, i).kind != "empty"


def test_parallel_segments():
    assert build_free_space(PolyCurve(PI), PolyCurve(SIGMA), 1.0).cell(0, 0).kind == "degenerate"
    assert build_free_space(PolyCurve(PI), PolyCurve(SIGMA), 0.5).cell(0, 0).kind == "empty"
    assert build_free_space(PolyCurve(PI), PolyCurve(SIGMA), 1.5).cell(0, 0).kind == "regular"


def test_negative_threshold():
    with pytest.raises(ValueError):
        build_free_space(PolyCurve(PI), PolyCurve(SIGMA), -1)


@settings(max_examples=15)
@given(curves)
def test_cell_membership_matches_distance(rng):
    a, b = random_curve(rng, 4), random_curve(rng, 3)
    d = float(rng.uniform(0.3, 1.5))
    fsd = build_free_space(a, b, d)
    for cell in fsd.cells:
        x0, x1, y0, y1 = cell.rect
        X, Y = np.meshgrid(np.linspace(x0, x1, 50), np.linspace(y0, y1, 50))
        X, Y = X.ravel(), Y.ravel()
        diff = a(X) - b(Y)
        dist = np.hypot(diff[:, 0], diff[:, 1])
        clear = np.abs(dist - d) > 1e-6
        if cell.shape is None:
            assert not np.any((dist < d) & clear)
            continue
        inside = np.array([cell.shape.contains((x, y), tol=1e-9) for x, y in zip(X, Y)])
        assert np.array_equal(inside[clear], (dist <= d)[clear])


def test_feasible_parallel():
    assert minex(PI, SIGMA, 1.0).minex_value <= 1e-3


def test_parallel_half_against_grid():
    res = minex(PI, SIGMA, 0.5)
    assert res.minex_value == pytest.approx(math.sqrt(2))
    assert res.matched_measure == 0.0
    g = grid_minex(PI, SIGMA, 0.5, n=100)
    assert res.minex_value <= 1.5 * (g.value + g.error_bound)
    assert res.minex_value >= g.value - g.error_bound


def test_monotone_in_threshold():
    a = PolyCurve([(0, 0), (1, 0.5), (2, -0.3), (3, 0)])
    b = PolyCurve([(0, 1), (1.5, 1.2), (3, 0.8)])
    ladder = [minex(a, b, d).minex_value for d in np.arange(0.2, 1.21, 0.2)]
    # each value is within 1+eps of the true nonincreasing optimum
    for lo, hi in zip(ladder, ladder[1:]):
        assert hi <= 1.5 * lo + 1e-9
    assert ladder[-1] <= ladder[0]


@settings(max_examples=6)
@given(curves)
def test_swap_symmetry(rng):
    a, b = random_curve(rng, 3), random_curve(rng, 3)
    d = float(rng.uniform(0.3, 1.0))
    v1, v2 = minex(a, b, d).minex_value, minex(b, a, d).minex_value
    # the two diagrams are mirror images; both values approximate the same optimum
    assert v1 <= 1.5 * v2 + 1e-6 and v2 <= 1.5 * v1 + 1e-6


@settings(max_examples=6)
@given(curves)
def test_bounded_by_diagonal(rng):
    a, b = random_curve(rng, 3), random_curve(rng, 4)
    d = float(rng.uniform(0.2, 1.0))
    res = minex(a, b, d)
    assert 0.0 <= res.minex_value <= 1.5 * math.hypot(a.length, b.length) + 1e-9


def test_scaling():
    a = PolyCurve([(0, 0), (1, 0.4), (2, 0)])
    b = PolyCurve([(0, 1), (2, 0.9)])
    base = minex(a, b, 0.6).minex_value
    scaled = minex(a.scaled(3.0), b.scaled(3.0), 1.8).minex_value
    assert scaled == pytest.approx(3.0 * base, rel=1e-6, abs=1e-9)


def test_decide_identical():
    c = [(0, 0), (1, 1), (2, 0), (3, 1)]
    assert weak_frechet_decide(c, c, 1e-3)


def test_decide_parallel():
    assert not weak_frechet_decide(PI, SIGMA, 0.9)
    assert weak_frechet_decide(PI, SIGMA, 1.0)


@settings(max_examples=10)
@given(curves)
def test_decide_agrees_with_interval_search(rng):
    a, b = random_curve(rng, 3), random_curve(rng, 3)
    # thresholds near the critical value are ill-conditioned for both routes
    for d in (0.4, 0.9, 1.6):
        diff = np.array([np.hypot(*(p - q)) for p in a.vertices for q in b.vertices])
        if np.min(np.abs(diff - d)) < 1e-3:
            continue
        assert weak_frechet_decide(a, b, d) == weak_frechet_reachable(a, b, d)


def test_result_document():
    doc = minex(PI, SIGMA, 0.5).to_dict()
    assert doc["threshold"] == 0.5 and doc["cells"]["empty"] == 1
    assert abs(doc["path"]["weight"] - doc["minex_value"]) < 1e-12
