"""Geometric primitives and free-space cell intervals.

Curves are stored as ``(k, d)`` float arrays. A curve with ``k`` vertices
has ``k - 1`` segments and is parametrized over ``[0, k - 1]`` so that the
integer ``i`` is vertex ``i`` and ``[i, i + 1]`` is the affine piece between
vertex ``i`` and vertex ``i + 1``.

Feasibility tests compare squared distances against ``eps**2`` inflated by a
relative slack (see :func:`sq_slack`). This keeps decisions taken exactly at
a critical value on the feasible side without moving the answer for an eps
that is a relative ``1e-9`` below it.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

Interval = Tuple[float, float]

REL_SLACK = 1e-12
ABS_SLACK = 1e-20
# tolerance when comparing parameters of two interval endpoints
PTOL = 1e-14


def sq_slack(eps: float) -> float:
    return REL_SLACK * eps * eps + ABS_SLACK


def as_curve(points, name: str = "curve") -> np.ndarray:
    """Validate and convert a vertex list into a float array."""
    arr = np.asarray(points, dtype=float)
    if arr.ndim != 2 or arr.shape[0] < 1:
        raise ValueError(f"{name}: expected a non-empty list of points")
    if arr.shape[1] < 2:
        raise ValueError(f"{name}: points need at least 2 coordinates")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name}: coordinates must be finite")
    return np.ascontiguousarray(arr)


def as_segment_curve(points, name: str = "curve") -> np.ndarray:
    """Like :func:`as_curve` but a single point is doubled into a segment."""
    arr = as_curve(points, name)
    if arr.shape[0] == 1:
        arr = np.vstack([arr, arr])
    return arr


@dataclass(frozen=True)
class Polyline:
    """A polygonal curve with cumulative arc lengths."""

    vertices: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "vertices", as_curve(self.vertices))

    @property
    def n_segments(self) -> int:
        return self.vertices.shape[0] - 1

    @property
    def cumulative_lengths(self) -> np.ndarray:
        return cumulative_lengths(self.vertices)

    def point_at(self, x: float) -> np.ndarray:
        return point_at(self.vertices, x)

    def length_between(self, x0: float, x1: float) -> float:
        return arc_length_between(self.vertices, x0, x1)


def cumulative_lengths(curve: np.ndarray) -> np.ndarray:
    seg = np.linalg.norm(np.diff(curve, axis=0), axis=1)
    return np.concatenate([[0.0], np.cumsum(seg)])


def point_at(curve: np.ndarray, x: float) -> np.ndarray:
    """Point of ``curve`` at global parameter ``x``."""
    k = curve.shape[0] - 1
    if k == 0:
        return curve[0].copy()
    x = min(max(x, 0.0), float(k))
    i = min(int(np.floor(x)), k - 1)
    t = x - i
    return (1.0 - t) * curve[i] + t * curve[i + 1]


def arc_length_at(curve: np.ndarray, x: float, cum: Optional[np.ndarray] = None) -> float:
    if cum is None:
        cum = cumulative_lengths(curve)
    k = curve.shape[0] - 1
    if k == 0:
        return 0.0
    x = min(max(x, 0.0), float(k))
    i = min(int(np.floor(x)), k - 1)
    return float(cum[i] + (x - i) * (cum[i + 1] - cum[i]))


def arc_length_between(curve: np.ndarray, x0: float, x1: float) -> float:
    cum = cumulative_lengths(curve)
    return arc_length_at(curve, x1, cum) - arc_length_at(curve, x0, cum)


def subcurve(curve: np.ndarray, x0: float, x1: float) -> np.ndarray:
    """Vertices of the piece of ``curve`` between parameters ``x0 <= x1``."""
    pts = [point_at(curve, x0)]
    for v in range(int(np.floor(x0)) + 1, int(np.ceil(x1))):
        pts.append(curve[v])
    pts.append(point_at(curve, x1))
    return np.array(pts)


def dist(p, q) -> float:
    return float(np.linalg.norm(np.asarray(p, float) - np.asarray(q, float)))


def point_segment_distance(p, a, b) -> float:
    p, a, b = (np.asarray(z, float) for z in (p, a, b))
    d = b - a
    dd = float(d @ d)
    if dd == 0.0:
        return float(np.linalg.norm(p - a))
    t = min(max(float((p - a) @ d) / dd, 0.0), 1.0)
    return float(np.linalg.norm(a + t * d - p))


def segment_ball_interval(a, b, center, eps: float) -> Optional[Interval]:
    """Parameter range of segment ``a -> b`` within ``eps`` of ``center``.

    Returns ``(t0, t1)`` with ``0 <= t0 <= t1 <= 1`` or ``None`` if empty.
    The foot of the perpendicular is computed directly so that the
    half-width does not suffer from cancellation near tangency.
    """
    a = np.asarray(a, float)
    b = np.asarray(b, float)
    c = np.asarray(center, float)
    lim = eps * eps + sq_slack(eps)
    d = b - a
    f = a - c
    dd = float(d @ d)
    if dd == 0.0:
        return (0.0, 1.0) if float(f @ f) <= lim else None
    tm = -float(f @ d) / dd
    foot = f + tm * d
    h2 = float(foot @ foot)
    if h2 > lim:
        return None
    half = np.sqrt((lim - h2) / dd)
    lo, hi = tm - half, tm + half
    if lo > 1.0:
        return (1.0, 1.0) if float((b - c) @ (b - c)) <= lim else None
    if hi < 0.0:
        return (0.0, 0.0) if float(f @ f) <= lim else None
    return (max(lo, 0.0), min(hi, 1.0))


def cell_free_space_membership(p0, p1, q0, q1, s: float, t: float, eps: float) -> bool:
    """Whether the pair ``(P_i(s), Q_j(t))`` of a cell is within ``eps``."""
    p = (1 - s) * np.asarray(p0, float) + s * np.asarray(p1, float)
    q = (1 - t) * np.asarray(q0, float) + t * np.asarray(q1, float)
    diff = p - q
    return float(diff @ diff) <= eps * eps + sq_slack(eps)


@dataclass(frozen=True)
class CellIntervals:
    """Feasible parts of the left and bottom edge of one cell."""

    lf: Optional[Interval]
    bf: Optional[Interval]


class CellGrid:
    """Feasible boundary intervals for every cell of a free-space diagram.

    ``lf[i, j]`` is the part of segment ``Q_j`` near vertex ``P[i]``
    (``i = 0..n``, ``j = 0..m-1``) and ``bf[i, j]`` the part of segment
    ``P_i`` near vertex ``Q[j]`` (``i = 0..n-1``, ``j = 0..m``). Empty
    intervals have ``lo > hi``. Cells are addressed 1-based via
    :meth:`cell`, including the virtual row and column past the end.
    """

    def __init__(self, P, Q, eps: float):
        self.P = as_segment_curve(P, "P")
        self.Q = as_segment_curve(Q, "Q")
        self.eps = float(eps)
        n, m = self.n, self.m
        self.lf = np.empty((n + 1, m, 2))
        self.bf = np.empty((n, m + 1, 2))
        for i in range(n + 1):
            for j in range(m):
                self.lf[i, j] = _pack(segment_ball_interval(self.Q[j], self.Q[j + 1], self.P[i], eps))
        for i in range(n):
            for j in range(m + 1):
                self.bf[i, j] = _pack(segment_ball_interval(self.P[i], self.P[i + 1], self.Q[j], eps))

    @property
    def n(self) -> int:
        return self.P.shape[0] - 1

    @property
    def m(self) -> int:
        return self.Q.shape[0] - 1

    def cell(self, i: int, j: int) -> CellIntervals:
        lf = bf = None
        if 1 <= i <= self.n + 1 and 1 <= j <= self.m:
            lf = _unpack(self.lf[i - 1, j - 1])
        if 1 <= i <= self.n and 1 <= j <= self.m + 1:
            bf = _unpack(self.bf[i - 1, j - 1])
        return CellIntervals(lf, bf)


def _pack(iv: Optional[Interval]):
    return (1.0, 0.0) if iv is None else iv


def _unpack(row) -> Optional[Interval]:
    lo, hi = float(row[0]), float(row[1])
    return None if lo > hi else (lo, hi)


def build_cell_intervals(P, Q, eps: float) -> CellGrid:
    return CellGrid(P, Q, eps)


def bounding_diameter(*curves: Sequence) -> float:
    pts = np.vstack([np.asarray(c, float) for c in curves])
    return float(np.linalg.norm(pts.max(axis=0) - pts.min(axis=0)))
