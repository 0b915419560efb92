import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from frechetlab.geometry import (
    Polyline,
    as_curve,
    build_cell_intervals,
    bounding_diameter,
    cell_free_space_membership,
    point_at,
    point_segment_distance,
    segment_ball_interval,
    subcurve,
)

coord = st.floats(-10, 10, allow_nan=False)
point = st.tuples(coord, coord)


def scan_interval(a, b, c, eps, step=1e-6):
    t = np.arange(0.0, 1.0 + step / 2, step)
    pts = np.outer(1 - t, a) + np.outer(t, b)
    ok = np.linalg.norm(pts - c, axis=1) <= eps
    if not ok.any():
        return None
    return t[ok].min(), t[ok].max()


def test_ball_interval_chord():
    assert segment_ball_interval((-2, 0), (2, 0), (0, 0), 1.0) == pytest.approx((0.25, 0.75))


def test_ball_interval_tangent_point():
    assert segment_ball_interval((0, 0), (1, 0), (0, 0), 0.0) == pytest.approx((0.0, 0.0), abs=1e-9)


@pytest.mark.parametrize("a, b, c, eps", [
    ((0, 0), (3, 4), (5, 5), 2.0),  # nearest point is the end (3, 4) at 2.236: empty
    ((0, 0), (3, 4), (4, 4), 2.0),
    ((0, 0), (3, 4), (1, 2), 2.0),
])
def test_ball_interval_against_scan(a, b, c, eps):
    got = segment_ball_interval(a, b, c, eps)
    ref = scan_interval(np.array(a, float), np.array(b, float), np.array(c, float), eps)
    if ref is None:
        assert got is None
        return
    assert got[0] == pytest.approx(ref[0], abs=1e-6)
    assert got[1] == pytest.approx(ref[1], abs=1e-6)


def test_ball_interval_degenerate_segment():
    assert segment_ball_interval((1, 1), (1, 1), (1, 1.5), 1.0) == (0.0, 1.0)
    assert segment_ball_interval((1, 1), (1, 1), (1, 3), 1.0) is None


def test_ball_interval_miss():
    assert segment_ball_interval((0, 0), (1, 0), (0.5, 2), 1.0) is None


def test_membership_examples():
    assert cell_free_space_membership((0, 0), (1, 0), (0, 0), (1, 0), 0.3, 0.3, 0.0)
    assert not cell_free_space_membership((0, 0), (1, 0), (0, 0), (1, 0), 0.0, 1.0, 0.5)


def test_membership_matches_distances():
    rng = np.random.default_rng(0)
    p0, p1, q0, q1 = rng.uniform(0, 5, (4, 2))
    eps = 2.0
    st_ = rng.random((10_000, 2))
    for s, t in st_:
        d = np.linalg.norm((1 - s) * p0 + s * p1 - (1 - t) * q0 - t * q1)
        if abs(d - eps) > 1e-9:
            assert cell_free_space_membership(p0, p1, q0, q1, s, t, eps) == (d <= eps)


def test_cell_grid_identity_segment():
    g = build_cell_intervals([[0, 0], [1, 0]], [[0, 0], [1, 0]], 0.0)
    c = g.cell(1, 1)
    assert c.lf == pytest.approx((0.0, 0.0), abs=1e-9)
    assert c.bf == pytest.approx((0.0, 0.0), abs=1e-9)


def test_cell_grid_virtual_cells_are_empty_or_defined():
    g = build_cell_intervals([[0, 0], [1, 0]], [[0, 0], [1, 0]], 0.0)
    assert g.cell(2, 1).lf == pytest.approx((1.0, 1.0), abs=1e-9)  # right edge of the last column
    assert g.cell(1, 2).bf == pytest.approx((1.0, 1.0), abs=1e-9)  # top edge of the last row
    assert g.cell(3, 1).lf is None


def test_cell_grid_huge_eps_everything_free():
    rng = np.random.default_rng(1)
    P, Q = rng.uniform(0, 3, (4, 2)), rng.uniform(0, 3, (5, 2))
    g = build_cell_intervals(P, Q, bounding_diameter(P, Q))
    assert np.all(g.lf == [0.0, 1.0]) and np.all(g.bf == [0.0, 1.0])


def test_cell_grid_matches_per_edge_recomputation():
    rng = np.random.default_rng(2)
    P, Q = rng.uniform(0, 4, (5, 2)), rng.uniform(0, 4, (5, 2))
    g = build_cell_intervals(P, Q, 1.3)
    for i in range(5):
        for j in range(4):
            iv = segment_ball_interval(Q[j], Q[j + 1], P[i], 1.3)
            assert g.cell(i + 1, j + 1).lf == iv
    for i in range(4):
        for j in range(5):
            iv = segment_ball_interval(P[i], P[i + 1], Q[j], 1.3)
            assert g.cell(i + 1, j + 1).bf == iv


def test_curve_validation():
    with pytest.raises(ValueError):
        as_curve([[0.0, np.nan]])
    with pytest.raises(ValueError):
        as_curve([[1.0]])
    with pytest.raises(ValueError):
        as_curve([])


def test_polyline_lengths_and_points():
    pl = Polyline([[0, 0], [3, 4], [3, 0]])
    assert list(pl.cumulative_lengths) == [0.0, 5.0, 9.0]
    assert pl.point_at(1.5) == pytest.approx([3.0, 2.0])
    assert pl.length_between(0.5, 1.5) == pytest.approx(4.5)


def test_subcurve_vertices():
    C = np.array([[0.0, 0], [1, 0], [1, 1], [0, 1]])
    S = subcurve(C, 0.5, 2.5)
    assert S.tolist() == [[0.5, 0.0], [1.0, 0.0], [1.0, 1.0], [0.5, 1.0]]


def test_points_in_three_dimensions():
    iv = segment_ball_interval((0, 0, 0), (2, 0, 0), (1, 0, 1), np.sqrt(2))
    assert iv == pytest.approx((0.0, 1.0))


@settings(max_examples=200, deadline=None)
@given(point, point, point, st.floats(0, 5), st.floats(0, 5))
def test_intervals_grow_with_eps(a, b, c, e1, e2):
    lo, hi = sorted((e1, e2))
    small = segment_ball_interval(a, b, c, lo)
    big = segment_ball_interval(a, b, c, hi)
    if small is not None:
        assert big is not None
        assert big[0] <= small[0] + 1e-9 and small[1] <= big[1] + 1e-9


@settings(max_examples=200, deadline=None)
@given(point, point, point, st.floats(0.01, 8))
def test_interval_endpoints_are_on_the_circle_or_segment_ends(a, b, c, eps):
    iv = segment_ball_interval(a, b, c, eps)
    a, b, c = np.array(a), np.array(b), np.array(c)
    if iv is None:
        assert point_segment_distance(c, a, b) > eps * (1 - 1e-9) - 1e-12
        return
    for t in iv:
        d = np.linalg.norm(a + t * (b - a) - c)
        assert d <= eps + 1e-7 * max(1.0, eps)
        if 1e-12 < t < 1 - 1e-12 and np.linalg.norm(b - a) > 1e-6:
            assert d == pytest.approx(eps, rel=1e-6, abs=1e-6)


@settings(max_examples=100, deadline=None)
@given(point, point, point, point, st.floats(0.1, 6),
       st.lists(st.tuples(st.floats(0, 1), st.floats(0, 1)), min_size=2, max_size=2))
def test_cell_free_space_is_convex(p0, p1, q0, q1, eps, pts):
    (s1, t1), (s2, t2) = pts
    a = cell_free_space_membership(p0, p1, q0, q1, s1, t1, eps)
    b = cell_free_space_membership(p0, p1, q0, q1, s2, t2, eps)
    if a and b:
        # convex combination of two feasible pairs stays feasible (up to rounding)
        assert cell_free_space_membership(p0, p1, q0, q1, (s1 + s2) / 2, (t1 + t2) / 2, eps * (1 + 1e-9))


@settings(max_examples=100, deadline=None)
@given(point, point, point, st.floats(0.1, 6))
def test_membership_agrees_with_edge_interval(p0, p1, q, eps):
    iv = segment_ball_interval(p0, p1, q, eps)
    for s in np.linspace(0, 1, 11):
        inside = cell_free_space_membership(p0, p1, q, q, s, 0.0, eps)
        if iv is None:
            continue
        if iv[0] + 1e-9 < s < iv[1] - 1e-9:
            assert inside
        elif s < iv[0] - 1e-9 or s > iv[1] + 1e-9:
            assert not inside


def test_point_at_clamps():
    C = np.array([[0.0, 0], [2, 0]])
    assert point_at(C, -1).tolist() == [0, 0]
    assert point_at(C, 5).tolist() == [2, 0]
