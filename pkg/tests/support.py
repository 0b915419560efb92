"""Shared generators and exact references for the test suite."""
from __future__ import annotations

from typing import List, Optional, Sequence, Tuple

import numpy as np

from frechetlab.classic import critical_values_classic, reach_intervals
from frechetlab.geometry import subcurve

GAP = 1e-5


def random_curve(rng: np.random.Generator, segments: int, scale: float = 10.0, dim: int = 2) -> np.ndarray:
    return rng.uniform(0.0, scale, (segments + 1, dim))


def random_pair(rng, max_n: int = 6, max_m: int = 6, scale: float = 10.0):
    n = int(rng.integers(1, max_n + 1))
    m = int(rng.integers(1, max_m + 1))
    return random_curve(rng, n, scale), random_curve(rng, m, scale)


def gap_midpoints(values: Sequence[float], gap: float = GAP) -> List[float]:
    """Midpoints of consecutive critical values further apart than ``gap``; includes one point past the top."""
    v = sorted(values)
    mids = [(a + b) / 2 for a, b in zip(v, v[1:]) if b - a > gap]
    mids.append(v[-1] + 1.0)
    return mids


def guarded_eps(rng, P, Q, gap: float = GAP) -> float:
    mids = gap_midpoints([c.value for c in critical_values_classic(P, Q)], gap)
    return float(mids[int(rng.integers(len(mids)))])


def exact_top_reach(P, Q, eps: float, u: float) -> Optional[Tuple[float, float]]:
    """Leftmost and rightmost top-row points reachable from ``(u, 0)``, by the cell DP on the tail of ``P``."""
    n = len(P) - 1
    if u >= n:
        return None
    S = subcurve(P, u, n)
    f = float(np.floor(u))

    def back(x: float) -> float:
        if u == f:
            return u + x
        return u + x * (f + 1 - u) if x <= 1 else f + x

    R = reach_intervals(S, Q, eps * (1 + 1e-12))
    m = len(Q) - 1
    ivs = []
    for i in range(len(S) - 1):
        lo, hi = R.br[i, m]
        if lo <= hi + 1e-14:
            ivs.append((back(i + lo), back(i + hi)))
    if not ivs:
        return None
    return min(a for a, _ in ivs), max(b for _, b in ivs)


def sample_feasible(rng, ivs: Sequence[Tuple[float, float]], count: int) -> List[float]:
    """``count`` uniform points from a union of intervals (points allowed)."""
    lens = np.array([h - l for l, h in ivs])
    if lens.sum() <= 0:
        return [float(ivs[int(rng.integers(len(ivs)))][0]) for _ in range(count)]
    out = []
    for _ in range(count):
        r = rng.random() * lens.sum()
        for (l, h), w in zip(ivs, lens):
            if r <= w:
                out.append(float(l + r))
                break
            r -= w
        else:
            out.append(float(ivs[-1][1]))
    return out


def close_pair(a, b, tol: float) -> bool:
    if a is None or b is None:
        return a is None and b is None
    return abs(a[0] - b[0]) <= tol and abs(a[1] - b[1]) <= tol


def topmost_scan(a: Sequence[float], b: Sequence[float], i: int) -> int:
    """Walk a monotone path up from the lowest point of level ``i``, greedily."""
    m = len(a)
    if a[i] > b[i]:
        return i
    x = a[i]
    for k in range(i + 1, m):
        if a[k] > b[k] or x > b[k]:
            return k
        x = max(x, a[k])
    return m - 1


def layered_dag(S: np.ndarray, layers: int):
    """Copies of ``S`` in ``layers`` layers, every point joined to every point of the next layer.

    Point sequences may repeat points, so a plain DAG on ``S`` cannot model
    them; unrolling into layers can, up to ``layers`` vertices.
    """
    k = len(S)
    V = np.vstack([S] * layers)
    edges = [(l * k + a, (l + 1) * k + b) for l in range(layers - 1) for a in range(k) for b in range(k)]
    return V, edges
