"""Classical, weak and discrete Fréchet distance."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import List, Optional, Tuple

import numpy as np

from . import kernels
from .geometry import (
    PTOL,
    CellGrid,
    as_segment_curve,
    dist,
    point_segment_distance,
)


@dataclass(frozen=True)
class CriticalValue:
    value: float
    kind: str
    witness: Tuple[int, ...] = field(default=())


@dataclass
class Reach:
    """Reachable parts of all left and bottom cell edges.

    ``lr[i, j]`` is the reachable part of the left edge of cell ``(i, j)``
    (``i = 0..n``) and ``br[i, j]`` of its bottom edge (``j = 0..m``), both
    0-based, empty when ``lo > hi``.
    """

    grid: CellGrid
    lr: np.ndarray
    br: np.ndarray
    accept: bool


def _ne(iv) -> bool:
    return iv[0] <= iv[1] + PTOL


def reach_intervals(P, Q, eps: float) -> Reach:
    """Row-wise reachability DP over the full grid (any dimension)."""
    g = CellGrid(P, Q, eps)
    n, m = g.n, g.m
    lr = np.tile([1.0, 0.0], (n + 1, m, 1))
    br = np.tile([1.0, 0.0], (n, m + 1, 1))
    start = dist(g.P[0], g.Q[0]) ** 2 <= eps * eps * (1 + 1e-12) + 1e-20
    end = dist(g.P[n], g.Q[m]) ** 2 <= eps * eps * (1 + 1e-12) + 1e-20
    if start:
        ok = True
        for j in range(m):
            iv = g.lf[0, j]
            if ok and _ne(iv) and iv[0] <= PTOL:
                lr[0, j] = iv
                ok = iv[1] >= 1 - PTOL
            else:
                ok = False
        ok = True
        for i in range(n):
            iv = g.bf[i, 0]
            if ok and _ne(iv) and iv[0] <= PTOL:
                br[i, 0] = iv
                ok = iv[1] >= 1 - PTOL
            else:
                ok = False
    for i in range(n):
        for j in range(m):
            L, B = lr[i, j], br[i, j]
            lf, bf = g.lf[i + 1, j], g.bf[i, j + 1]
            if _ne(lf):
                if _ne(B):
                    lr[i + 1, j] = lf
                elif _ne(L) and max(lf[0], L[0]) <= lf[1] + PTOL:
                    lr[i + 1, j] = (max(lf[0], L[0]), lf[1])
            if _ne(bf):
                if _ne(L):
                    br[i, j + 1] = bf
                elif _ne(B) and max(bf[0], B[0]) <= bf[1] + PTOL:
                    br[i, j + 1] = (max(bf[0], B[0]), bf[1])
    accept = bool(start and end and (_ne(lr[n, m - 1]) or _ne(br[n - 1, m])))
    return Reach(g, lr, br, accept)


def decide_frechet(P, Q, eps: float) -> bool:
    """Whether the Fréchet distance of ``P`` and ``Q`` is at most ``eps``."""
    P = as_segment_curve(P, "P")
    Q = as_segment_curve(Q, "Q")
    if eps < 0:
        return False
    if P.shape[1] != Q.shape[1]:
        raise ValueError("P and Q must have the same dimension")
    if P.shape[1] == 2:
        return bool(kernels.decide_classic(P, Q, float(eps)))
    return reach_intervals(P, Q, eps).accept


def _bisector_hits(pk, pl, a, b):
    """Points on segment ``a -> b`` equidistant from ``pk`` and ``pl``."""
    w = pl - pk
    d = b - a
    dw = float(d @ w)
    if dw == 0.0:
        return None
    h = (float(pl @ pl) - float(pk @ pk)) / 2.0
    t = (h - float(a @ w)) / dw
    if t < -1e-9 or t > 1 + 1e-9:
        return None
    t = min(max(t, 0.0), 1.0)
    return a + t * d


def _dedupe(vals: List[CriticalValue]) -> List[CriticalValue]:
    vals = sorted(vals, key=lambda c: c.value)
    out: List[CriticalValue] = []
    for c in vals:
        if out and abs(c.value - out[-1].value) <= 1e-12 * max(1.0, abs(c.value)):
            continue
        out.append(c)
    return out


def critical_values_classic(P, Q, dedupe: bool = True) -> List[CriticalValue]:
    """Endpoint, vertex-edge and bisector events of the pair ``(P, Q)``."""
    P = as_segment_curve(P, "P")
    Q = as_segment_curve(Q, "Q")
    out = [
        CriticalValue(dist(P[0], Q[0]), "A", (0, 0)),
        CriticalValue(dist(P[-1], Q[-1]), "A", (len(P) - 1, len(Q) - 1)),
    ]
    for X, Y, tag in ((P, Q, 0), (Q, P, 1)):
        for i in range(len(X)):
            for j in range(len(Y) - 1):
                out.append(CriticalValue(point_segment_distance(X[i], Y[j], Y[j + 1]), "B", (tag, i, j)))
        for k, l in combinations(range(len(X)), 2):
            for j in range(len(Y) - 1):
                q = _bisector_hits(X[k], X[l], Y[j], Y[j + 1])
                if q is not None:
                    out.append(CriticalValue(dist(q, X[k]), "C", (tag, k, l, j)))
    return _dedupe(out) if dedupe else out


def search_critical(decide, values, kinds=None, lower: float = 0.0, upper_hint: Optional[float] = None):
    """Smallest candidate where ``decide`` holds, with a bisection guard.

    ``values`` must be sorted. Returns ``(value, kind)``. When the candidate
    list misses the optimum (the value just below is still accepted) the
    answer is refined by bisection on the decision procedure.
    """
    vals = [v for v in values if v >= lower - 1e-15]
    kinds = list(kinds) if kinds is not None else ["?"] * len(values)
    kinds = kinds[len(values) - len(vals):]
    lo, hi = -1, len(vals) - 1
    if not vals or not decide(vals[-1]):
        top = upper_hint if upper_hint is not None else (vals[-1] if vals else 1.0)
        top = max(top, 1e-12)
        while not decide(top):
            top *= 2.0
            if top > 1e300:
                return float("inf"), "none"
        return _bisect(decide, vals[-1] if vals else 0.0, top), "bisection"
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if decide(vals[mid]):
            hi = mid
        else:
            lo = mid
    c, kind = vals[hi], kinds[hi]
    if c > 0:
        below = c * (1 - 1e-9) - 1e-12
        if below >= 0 and decide(below):
            floor = vals[lo] if lo >= 0 else 0.0
            return _bisect(decide, floor, below), "bisection"
    return c, kind


def _bisect(decide, lo: float, hi: float, iters: int = 200) -> float:
    # invariant: decide(hi) is true; stops at double resolution
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if decide(mid):
            hi = mid
        else:
            lo = mid
    return hi


def compute_frechet_with_kind(P, Q) -> Tuple[float, str]:
    P = as_segment_curve(P, "P")
    Q = as_segment_curve(Q, "Q")
    crit = critical_values_classic(P, Q)
    lower = max(dist(P[0], Q[0]), dist(P[-1], Q[-1]))
    return search_critical(
        lambda e: decide_frechet(P, Q, e),
        [c.value for c in crit],
        [c.kind for c in crit],
        lower=lower,
    )


def compute_frechet(P, Q) -> float:
    return compute_frechet_with_kind(P, Q)[0]


def discrete_frechet(P, Q) -> float:
    P = np.ascontiguousarray(np.asarray(P, float))
    Q = np.ascontiguousarray(np.asarray(Q, float))
    if P.ndim != 2 or Q.ndim != 2 or len(P) == 0 or len(Q) == 0:
        raise ValueError("both curves need at least one vertex")
    return float(kernels.discrete_frechet(P, Q))


class _DSU:
    def __init__(self, k: int):
        self.parent = list(range(k))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb


def _weak_edges(P, Q):
    n, m = len(P) - 1, len(Q) - 1
    edges = []
    for i in range(n - 1):
        for j in range(m):
            w = point_segment_distance(P[i + 1], Q[j], Q[j + 1])
            edges.append((w, i * m + j, (i + 1) * m + j))
    for i in range(n):
        for j in range(m - 1):
            w = point_segment_distance(Q[j + 1], P[i], P[i + 1])
            edges.append((w, i * m + j, i * m + j + 1))
    edges.sort()
    return n, m, edges


def decide_weak_frechet(P, Q, eps: float) -> bool:
    """Non-monotone reachability: cell connectivity under opened passages."""
    P = as_segment_curve(P, "P")
    Q = as_segment_curve(Q, "Q")
    lim = eps * (1 + 1e-12) + 1e-300
    if dist(P[0], Q[0]) > lim or dist(P[-1], Q[-1]) > lim:
        return False
    n, m, edges = _weak_edges(P, Q)
    dsu = _DSU(n * m)
    for w, a, b in edges:
        if w > lim:
            break
        dsu.union(a, b)
    return dsu.find(0) == dsu.find(n * m - 1)


def compute_weak_frechet(P, Q) -> float:
    """Bottleneck value of the cell graph, grown edge by edge (Kruskal)."""
    P = as_segment_curve(P, "P")
    Q = as_segment_curve(Q, "Q")
    base = max(dist(P[0], Q[0]), dist(P[-1], Q[-1]))
    n, m, edges = _weak_edges(P, Q)
    dsu = _DSU(n * m)
    best = 0.0
    for w, a, b in edges:
        if dsu.find(0) == dsu.find(n * m - 1):
            break
        dsu.union(a, b)
        best = w
    if n * m == 1:
        best = 0.0
    return max(base, best)
