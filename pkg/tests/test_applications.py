from math import sqrt

import numpy as np
import pytest

from frechetlab.applications import (
    GeometricDag,
    closed_frechet_decide,
    closed_frechet_optimize,
    closed_match,
    dag_match,
    dag_match_decide,
    dag_match_optimize,
    max_walk,
    min_walk,
    partial_match,
    partial_match_decide,
    partial_match_optimize,
    rotate,
)
from frechetlab.classic import compute_frechet, decide_frechet
from frechetlab.fsmap import ContractViolation
from frechetlab.geometry import arc_length_between, point_segment_distance, subcurve

from support import random_curve

SQUARE = np.array([[-1.0, -1], [1, -1], [1, 1], [-1, 1], [-1, -1]])
P5 = np.array([[0.0, 0], [2, 1], [4, 0], [5, 3], [7, 2], [8, 4]])


# ------------------------------------------------------------- partial


def test_exact_subcurve_matches_at_zero():
    for a, b in ((0.5, 2.5), (1.0, 3.0), (2.25, 4.75), (0.0, 5.0)):
        Q = subcurve(P5, a, b)
        assert partial_match_decide(P5, Q, 1e-12)


def test_start_that_cannot_attach():
    Q = np.array([[20.0, 20], [21, 21]])
    gap = min(point_segment_distance(Q[0], P5[i], P5[i + 1]) for i in range(len(P5) - 1))
    assert not partial_match_decide(P5, Q, gap * 0.999)


def test_partial_witness_is_a_real_match():
    rng = np.random.default_rng(40)
    for _ in range(25):
        P, Q = random_curve(rng, 6), random_curve(rng, 2, scale=4)
        eps = float(rng.uniform(2, 6))
        hit = partial_match(P, Q, eps)
        if hit is not None:
            assert decide_frechet(subcurve(P, hit.start, hit.end), Q, eps * (1 + 1e-9) + 1e-12)


def test_partial_optimum_is_tight():
    rng = np.random.default_rng(41)
    for _ in range(15):
        P, Q = random_curve(rng, 5), random_curve(rng, 2, scale=4)
        best = partial_match_optimize(P, Q)
        assert partial_match_decide(P, Q, best)
        margin = max(1e-12, 1e-9 * best)
        if best > margin:
            assert not partial_match_decide(P, Q, best - margin)


# ------------------------------------------------------------- closed


def test_identical_closed_squares():
    assert closed_frechet_decide(SQUARE, SQUARE, 0.0)
    assert closed_frechet_optimize(SQUARE, SQUARE) == pytest.approx(0.0, abs=1e-9)


def test_rotated_start_on_the_same_square():
    shifted = np.vstack([SQUARE[2:-1], SQUARE[:3]])
    assert closed_frechet_decide(SQUARE, shifted, 1e-9)
    assert not decide_frechet(SQUARE, shifted, 1.0)


def test_concentric_squares():
    # outer corners lie sqrt(2) away from the inner square
    big = 2 * SQUARE
    assert closed_frechet_decide(SQUARE, big, sqrt(2))
    assert not closed_frechet_decide(SQUARE, big, sqrt(2) - 0.01)
    assert not closed_frechet_decide(SQUARE, big, 1.0)
    assert closed_frechet_optimize(SQUARE, big) == pytest.approx(sqrt(2), abs=1e-9)
    shifts = np.arange(0.0, 4.0, 1e-3)
    assert min(compute_frechet(rotate(SQUARE, t), big) for t in shifts[::50]) >= sqrt(2) - 1e-9
    t = closed_match(SQUARE, big, sqrt(2))
    assert decide_frechet(rotate(SQUARE, t), big, sqrt(2) * (1 + 1e-9))


def test_open_curves_are_rejected():
    with pytest.raises(ContractViolation):
        closed_frechet_decide(P5, SQUARE, 1.0)
    with pytest.raises(ContractViolation):
        closed_frechet_optimize(SQUARE, P5)


# --------------------------------------------------------------- walks


def test_walks_on_the_curve_itself():
    total = arc_length_between(P5, 0.0, 5.0)
    longest = max_walk(P5, P5, 0.0)
    shortest = min_walk(P5, P5, 0.0)
    assert longest.length == pytest.approx(total, abs=1e-6)
    assert shortest.length == pytest.approx(total, abs=1e-6)


def test_walks_with_a_huge_leash():
    Q = np.array([[3.0, 1.0], [3.5, 1.5]])
    total = arc_length_between(P5, 0.0, 5.0)
    assert max_walk(P5, Q, 100.0).length == pytest.approx(total)
    assert min_walk(P5, Q, 100.0).length == pytest.approx(0.0, abs=1e-12)


def test_walk_witnesses_match():
    rng = np.random.default_rng(42)
    for _ in range(25):
        P, Q = random_curve(rng, 6), random_curve(rng, 2, scale=4)
        eps = float(rng.uniform(2, 6))
        lo, hi = max_walk(P, Q, eps), min_walk(P, Q, eps)
        assert (lo is None) == (hi is None) == (not partial_match_decide(P, Q, eps))
        if lo is None:
            continue
        assert hi.length <= lo.length + 1e-9
        for w in (lo, hi):
            assert decide_frechet(subcurve(P, w.start, w.end), Q, eps * (1 + 1e-9) + 1e-12)


# ----------------------------------------------------------------- DAG


def test_path_graph_of_the_curve():
    G = GeometricDag(P5, [(k, k + 1) for k in range(len(P5) - 1)])
    assert dag_match(P5, G, 0.0) == list(range(len(P5)))
    ok, pts = dag_match_decide(P5, G, 0.0)
    assert ok and np.array_equal(pts, P5)
    assert dag_match_optimize(P5, G) == pytest.approx(0.0, abs=1e-9)


def test_cyclic_graph_is_rejected():
    G = GeometricDag(P5[:3], [(0, 1), (1, 2), (2, 0)])
    with pytest.raises(ContractViolation):
        dag_match(P5, G, 1.0)
    with pytest.raises(ValueError):
        GeometricDag(P5[:3], [(0, 7)])


def test_dag_witness_verifies_and_optimum_is_tight():
    rng = np.random.default_rng(43)
    for _ in range(20):
        k = int(rng.integers(2, 7))
        V = rng.uniform(0, 10, (k, 2))
        E = [(a, b) for a in range(k) for b in range(a + 1, k) if rng.random() < 0.5]
        G = GeometricDag(V, E)
        P = random_curve(rng, int(rng.integers(1, 5)))
        best = dag_match_optimize(P, G)
        path = dag_match(P, G, best)
        assert path is not None
        assert all((a, b) in E for a, b in zip(path, path[1:]))
        assert decide_frechet(V[path] if len(path) > 1 else V[path * 2], P, best * (1 + 1e-9) + 1e-12)
        margin = max(1e-12, 1e-9 * best)
        if best > margin:
            assert dag_match(P, G, best - margin) is None
