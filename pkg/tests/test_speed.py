import random
from math import inf, sqrt

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from frechetlab.classic import compute_frechet, decide_frechet
from frechetlab.oracles import bisect_threshold, slope_grid_decide
from frechetlab.speed import (
    ChainProjector,
    IntervalSequence,
    SpeedProfiles,
    chain_walk_projection,
    compute_potential_chains,
    compute_speed_frechet,
    compute_speed_frechet_with_kind,
    critical_values_speed,
    decide_speed_fast,
    decide_speed_simple,
    last_row_entry_counts,
    lower_bound_instance,
    project_interval,
    slope_bounds,
    speed_simple_run,
)

from support import random_curve

UNIT = [[0.0, 0], [1, 0], [2, 0], [3, 0]]


def random_profiles(rng, n, m, lo=(0.0, 0.5), hi=(1.0, 4.0)):
    def one(k):
        a = rng.uniform(*lo, k)
        return np.column_stack([a, a + rng.uniform(*hi, k)])

    return SpeedProfiles(one(n), one(m))


# ------------------------------------------------------------ projection


def test_forced_diagonal_from_the_corner():
    assert project_interval((1.0, 1.0), 1.0, 1.0) == (1.0, 1.0)


def test_unconstrained_band_covers_the_exit_side():
    assert project_interval((0.0, 2.0), 0.0, inf) == (0.0, 2.0)


def test_two_boundary_rays_from_the_corner():
    assert project_interval((1.0, 1.0), 0.5, 2.0) == pytest.approx((0.5, 1.5))


@settings(max_examples=200, deadline=None)
@given(st.lists(st.floats(0, 2), min_size=2, max_size=8), st.floats(0, 5), st.floats(0, 5))
def test_projection_preserves_order(cuts, s1, s2):
    lo, hi = sorted((s1, s2))
    c = sorted(cuts)
    ivs = list(zip(c[::2], c[1::2]))
    out = [project_interval(iv, lo, hi) for iv in ivs]
    for (a1, b1), (a2, b2) in zip(out, out[1:]):
        assert a1 <= a2 + 1e-12 and b1 <= b2 + 1e-12


def test_slope_conventions():
    P = [[0.0, 0], [1, 0]]
    mins, maxs, dead = slope_bounds(P, P, SpeedProfiles.unconstrained(1, 1))
    assert (mins[0, 0], maxs[0, 0], dead) == (0.0, inf, False)
    mins, maxs, dead = slope_bounds(P, P, SpeedProfiles([[0.0, 0.0]], [[1.0, 1.0]]))
    assert dead


def test_profile_validation():
    with pytest.raises(ValueError):
        SpeedProfiles([[2.0, 1.0]], [[0.0, 1.0]])
    with pytest.raises(ValueError):
        SpeedProfiles([[-1.0, 1.0]], [[0.0, 1.0]])
    with pytest.raises(ValueError):
        decide_speed_simple([[0, 0], [1, 0]], [[0, 0], [1, 0]], SpeedProfiles([[0, 1], [0, 1]], [[0, 1]]), 1.0)


# ------------------------------------------------------- chain projection


def test_point_on_the_edge_projects_to_itself():
    prof = SpeedProfiles(np.tile([1.0, 1.0], (3, 1)), np.tile([1.0, 1.0], (3, 1)))
    proj = ChainProjector(UNIT, UNIT, prof)
    for d in ("min", "max"):
        assert proj.min_max_projection((1.3, 2.0), ("top", 1, 2), d) == ("on", (1.3, 2.0))
        assert proj.min_max_projection((2.0, 0.4), ("right", 2, 0), d) == ("on", (2.0, 0.4))


def test_equal_speeds_follow_the_diagonal():
    prof = SpeedProfiles(np.tile([1.0, 1.0], (3, 1)), np.tile([1.0, 1.0], (3, 1)))
    proj = ChainProjector(UNIT, UNIT, prof)
    for d in ("min", "max"):
        kind, pt = proj.min_max_projection((0.2, 0.0), ("top", 1, 1), d)
        assert kind == "on" and pt == pytest.approx((1.2, 1.0))
        kind, pt = proj.min_max_projection((0.2, 0.0), ("right", 2, 1), d)
        assert kind == "on" and pt == pytest.approx((2.0, 1.8))
        assert proj.min_max_projection((0.2, 0.0), ("top", 2, 1), d)[0] == "before"
        assert proj.min_max_projection((0.2, 0.0), ("top", 0, 1), d)[0] == "after"


def test_zero_minimum_speed_stalls():
    prof = SpeedProfiles(np.tile([1.0, 1.0], (3, 1)), np.array([[0.0, 1.0], [1.0, 1.0], [1.0, 1.0]]))
    proj = ChainProjector(UNIT, UNIT, prof)
    for j in (1, 2):
        for i in (1, 2, 3):
            # the chain meets x = i at height 0, below the edge
            assert proj.min_max_projection((0.0, 0.0), ("right", i, j), "min")[0] == "before"
            assert chain_walk_projection(UNIT, UNIT, prof, (0.0, 0.0), ("right", i, j), "min")[0] == "before"
    for i in range(3):
        # it never climbs to y = 1, so it passes every top edge on the right
        assert proj.min_max_projection((0.0, 0.0), ("top", i, 1), "min")[0] == "after"


def test_lookup_matches_chain_walk():
    rng = np.random.default_rng(20)
    checked = 0
    for _ in range(60):
        n, m = int(rng.integers(1, 5)), int(rng.integers(1, 5))
        P, Q = random_curve(rng, n), random_curve(rng, m)
        prof = random_profiles(rng, n, m)
        proj = ChainProjector(P, Q, prof)
        for _ in range(10):
            p = (float(rng.uniform(0, n)), float(rng.uniform(0, m)))
            if rng.random() < 0.5:
                edge = ("top", int(rng.integers(0, n)), int(rng.integers(int(np.ceil(p[1])), m + 1)))
            else:
                edge = ("right", int(rng.integers(int(np.ceil(p[0])), n + 1)), int(rng.integers(0, m)))
            for d in ("min", "max"):
                fast = proj.min_max_projection(p, edge, d)
                slow = chain_walk_projection(P, Q, prof, p, edge, d)
                assert fast[0] == slow[0] or fast[0] == "on" or slow[0] == "on", (p, edge, d, fast, slow)
                if fast[0] == "on" and slow[0] == "on":
                    assert fast[1] == pytest.approx(slow[1], abs=1e-9)
                    checked += 1
    assert checked > 50


# --------------------------------------------------------------- decision


def test_lockstep_on_identical_curves():
    prof = SpeedProfiles(np.tile([1.0, 1.0], (3, 1)), np.tile([1.0, 1.0], (3, 1)))
    assert decide_speed_simple(UNIT, UNIT, prof, 0.0)
    assert decide_speed_fast(UNIT, UNIT, prof, 0.0)


def test_tight_band_severs_a_classically_feasible_path():
    P = [[0.0, 0], [2, 0]]
    Q = [[0.0, 0], [1, 0], [2, 0]]
    # P takes 2 time units; Q rushes its first half and crawls the second
    prof = SpeedProfiles([[1.0, 1.0]], [[2.0, 2.0], [2 / 3, 2 / 3]])
    mins, maxs, _ = slope_bounds(P, Q, prof)
    bands = np.stack([mins, maxs], axis=-1)
    assert decide_frechet(P, Q, 0.25)
    assert not decide_speed_simple(P, Q, prof, 0.25)
    assert not decide_speed_fast(P, Q, prof, 0.25)
    assert not slope_grid_decide(P, Q, bands, 0.25, r=16, slack=0.01)
    assert decide_speed_simple(P, Q, prof, 0.6)
    assert slope_grid_decide(P, Q, bands, 0.6, r=16, slack=0.01)
    assert compute_speed_frechet(P, Q, prof) == pytest.approx(0.5, abs=1e-9)


def test_fast_matches_simple_and_growth_bound_holds():
    rng = np.random.default_rng(21)
    for _ in range(80):
        n, m = int(rng.integers(1, 6)), int(rng.integers(1, 6))
        P, Q = random_curve(rng, n), random_curve(rng, m)
        prof = random_profiles(rng, n, m)
        eps = float(rng.uniform(1, 10))
        run = speed_simple_run(P, Q, prof, eps)
        assert run.growth_ok
        assert decide_speed_fast(P, Q, prof, eps) == run.accept


def test_unconstrained_reduces_to_classical():
    rng = np.random.default_rng(22)
    for _ in range(30):
        n, m = int(rng.integers(1, 5)), int(rng.integers(1, 5))
        P, Q = random_curve(rng, n), random_curve(rng, m)
        prof = SpeedProfiles.unconstrained(n, m)
        assert compute_speed_frechet(P, Q, prof) == pytest.approx(compute_frechet(P, Q), abs=1e-9)


def test_decision_monotone_in_eps_and_antitone_in_windows():
    rng = np.random.default_rng(23)
    for _ in range(40):
        n, m = int(rng.integers(1, 5)), int(rng.integers(1, 5))
        P, Q = random_curve(rng, n), random_curve(rng, m)
        prof = random_profiles(rng, n, m)
        e1, e2 = sorted(rng.uniform(0, 10, 2))
        if decide_speed_simple(P, Q, prof, e1):
            assert decide_speed_simple(P, Q, prof, e2)
        q = prof.q_limits.copy()
        k = int(rng.integers(m))
        lo, hi = q[k]
        q[k] = (lo + 0.25 * (hi - lo), hi - 0.25 * (hi - lo))
        tight = SpeedProfiles(prof.p_limits, q)
        if decide_speed_simple(P, Q, tight, e2):
            assert decide_speed_simple(P, Q, prof, e2)


def test_zero_top_speed_has_no_finite_answer():
    P = [[0.0, 0], [1, 0]]
    prof = SpeedProfiles([[0.0, 0.0]], [[0.0, 1.0]])
    assert compute_speed_frechet(P, P, prof) == inf
    assert not decide_speed_simple(P, P, prof, 100.0)


# ------------------------------------------------------------ lower bound


def test_lower_bound_instance_shape():
    P, Q, prof, eps = lower_bound_instance(4)
    assert len(P) == 5 and len(Q) == 4
    assert eps == pytest.approx(sqrt(0.5), abs=1e-3)
    assert last_row_entry_counts(4).max() >= 4
    with pytest.raises(ValueError):
        lower_bound_instance(5)
    with pytest.raises(ValueError):
        lower_bound_instance(2)


def test_lower_bound_fast_agrees_with_simple():
    P, Q, prof, eps = lower_bound_instance(8)
    assert decide_speed_fast(P, Q, prof, eps) == decide_speed_simple(P, Q, prof, eps)


# ------------------------------------------------------- critical values


def test_potential_chains_uniform():
    assert compute_potential_chains([1.0] * 5, 1.5) == [(0, 2), (1, 3), (2, 4), (3, 5)]
    assert compute_potential_chains([1.0] * 5, 5.5) == []


def all_pairs_chains(times, t):
    out = []
    for i in range(len(times)):
        total = 0.0
        for j in range(i + 1, len(times) + 1):
            total += times[j - 1]
            if t <= total:
                out.append((i, j))
                break
    return out


@settings(max_examples=200, deadline=None)
@given(st.lists(st.one_of(st.integers(0, 20).map(lambda k: k / 4), st.just(inf)), min_size=1, max_size=10),
       st.integers(1, 80).map(lambda k: k / 4))
def test_potential_chains_match_all_pairs(times, t):
    assert compute_potential_chains(times, t) == all_pairs_chains(times, t)


def test_identical_curves_have_speed_distance_zero():
    rng = np.random.default_rng(24)
    for _ in range(10):
        n = int(rng.integers(1, 5))
        P = random_curve(rng, n)
        lim = np.column_stack([np.full(n, 0.5), np.full(n, 2.0)])
        assert compute_speed_frechet(P, P, SpeedProfiles(lim, lim)) == pytest.approx(0.0, abs=1e-9)


def test_speed_optimum_against_bisection():
    rng = np.random.default_rng(25)
    for _ in range(15):
        n, m = int(rng.integers(1, 4)), int(rng.integers(1, 4))
        P, Q = random_curve(rng, n), random_curve(rng, m)
        prof = random_profiles(rng, n, m)
        value, kind = compute_speed_frechet_with_kind(P, Q, prof)
        if value == inf:
            assert not decide_speed_simple(P, Q, prof, 1e6)
            continue
        ref = bisect_threshold(lambda e: decide_speed_simple(P, Q, prof, e), 0.0, 50.0, tol=1e-12)
        assert value == pytest.approx(ref, abs=1e-6)
        assert value >= compute_frechet(P, Q) - 1e-9
        assert decide_speed_fast(P, Q, prof, value)
        margin = max(1e-12, 1e-9 * value)
        if value > margin:
            assert not decide_speed_fast(P, Q, prof, value - margin)


def test_critical_values_are_sorted_and_distinct():
    rng = np.random.default_rng(26)
    P, Q = random_curve(rng, 3), random_curve(rng, 3)
    vals = [v for v, _ in critical_values_speed(P, Q, random_profiles(rng, 3, 3))]
    assert vals == sorted(vals)
    assert all(b - a > 0 for a, b in zip(vals, vals[1:]))


# -------------------------------------------------------- interval sequence


ops = st.lists(
    st.one_of(
        st.tuples(st.just("insert"), st.integers(0, 40), st.integers()),
        st.tuples(st.just("append"), st.integers()),
        st.tuples(st.just("delete"), st.integers(0, 40), st.integers(0, 40)),
        st.tuples(st.just("splitjoin"), st.integers(0, 40)),
    ),
    max_size=60,
)


@settings(max_examples=150, deadline=None)
@given(ops)
def test_interval_sequence_matches_a_list(script):
    seq = IntervalSequence(random.Random(1))
    ref = []
    for op in script:
        if op[0] == "insert":
            pos = min(op[1], len(ref))
            seq.insert(pos, op[2])
            ref.insert(pos, op[2])
        elif op[0] == "append":
            seq.append(op[1])
            ref.append(op[1])
        elif op[0] == "delete":
            a, b = sorted((min(op[1], len(ref)), min(op[2], len(ref))))
            seq.delete(a, b)
            del ref[a:b]
        else:
            k = min(op[1], len(ref))
            left, right = seq.split(k)
            assert left.items() == ref[:k] and right.items() == ref[k:]
            seq = left.join(right)
        assert len(seq) == len(ref)
    assert seq.items() == ref
    for k, v in enumerate(ref):
        assert seq.at(k) == v
    with pytest.raises(IndexError):
        seq.at(len(ref))


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(-50, 50), max_size=40), st.integers(-50, 50))
def test_interval_sequence_search(values, x):
    seq = IntervalSequence()
    values = sorted(values)
    for v in values:
        seq.append(v)
    expect = next((k for k, v in enumerate(values) if v >= x), len(values))
    assert seq.search(lambda v: v >= x) == expect
