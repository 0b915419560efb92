"""Fréchet distance under per-segment speed limits.

A traversal moves along ``P`` and ``Q`` simultaneously in time, and on every
segment the speed must stay in that segment's ``[vmin, vmax]`` window. In the
free-space diagram this becomes a per-cell band of allowed slopes. Two
decision procedures are provided: a direct cell-by-cell propagation and a
lazy one that keeps reachable intervals in a balanced sequence and only
materializes their endpoints when needed.

Cell-local coordinates used throughout: an *entry* coordinate ``r`` runs
over ``[0, 2]``, first down the left edge (``r = 0`` top-left corner,
``r = 1`` bottom-left) and then along the bottom edge to the bottom-right
corner. An *exit* coordinate ``s`` runs along the top edge left to right
(``s`` in ``[0, 1]``) and then down the right edge (``s`` in ``[1, 2]``).
Both orders agree with the diagram's "before" order.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations
from math import inf, isinf
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import kernels
from .classic import critical_values_classic, search_critical
from .geometry import PTOL, CellGrid, as_segment_curve, dist

Interval = Tuple[float, float]


# ---------------------------------------------------------------- profiles


@dataclass(frozen=True)
class SpeedProfiles:
    """Speed windows ``(vmin, vmax)`` for every segment of ``P`` and ``Q``."""

    p_limits: np.ndarray
    q_limits: np.ndarray

    def __post_init__(self):
        for name in ("p_limits", "q_limits"):
            arr = np.asarray(getattr(self, name), dtype=float).reshape(-1, 2)
            if np.any(np.isnan(arr)) or np.any(arr[:, 0] < 0) or np.any(arr[:, 0] > arr[:, 1]):
                raise ValueError(f"{name}: need 0 <= vmin <= vmax")
            if np.any(np.isinf(arr[:, 0])):
                raise ValueError(f"{name}: vmin must be finite")
            object.__setattr__(self, name, arr)

    @classmethod
    def unconstrained(cls, n: int, m: int) -> "SpeedProfiles":
        return cls(np.tile([0.0, inf], (n, 1)), np.tile([0.0, inf], (m, 1)))


def _as_profiles(profiles, n: int, m: int) -> SpeedProfiles:
    if not isinstance(profiles, SpeedProfiles):
        profiles = SpeedProfiles(*profiles)
    if len(profiles.p_limits) != n or len(profiles.q_limits) != m:
        raise ValueError("speed profiles must cover every segment of both curves")
    return profiles


def parameter_speeds(curve: np.ndarray, limits: np.ndarray):
    """Per-segment ``(umin, umax)`` in parameter units per time unit.

    Zero-length segments are unconstrained (``0, inf``).
    """
    lengths = np.linalg.norm(np.diff(curve, axis=0), axis=1)
    umin = np.zeros(len(lengths))
    umax = np.full(len(lengths), inf)
    pos = lengths > 0
    umin[pos] = limits[pos, 0] / lengths[pos]
    umax[pos] = limits[pos, 1] / lengths[pos]
    return umin, umax, bool(np.any(pos & (limits[:, 1] == 0)))


def _ratio(a: float, b: float) -> float:
    if b == 0:
        return inf if a > 0 else inf
    return a / b


def slope_bounds(P, Q, profiles) -> Tuple[np.ndarray, np.ndarray, bool]:
    """Per-cell ``(minS, maxS)`` arrays and a flag for a stalled segment.

    The flag is set when some positive-length segment has ``vmax = 0``; no
    traversal can then finish at all.
    """
    P = as_segment_curve(P, "P")
    Q = as_segment_curve(Q, "Q")
    n, m = len(P) - 1, len(Q) - 1
    prof = _as_profiles(profiles, n, m)
    pmin, pmax, pdead = parameter_speeds(P, prof.p_limits)
    qmin, qmax, qdead = parameter_speeds(Q, prof.q_limits)
    mins = np.empty((n, m))
    maxs = np.empty((n, m))
    for i in range(n):
        for j in range(m):
            mins[i, j] = 0.0 if isinf(pmax[i]) else _ratio(qmin[j], pmax[i])
            maxs[i, j] = inf if isinf(qmax[j]) else _ratio(qmax[j], pmin[i])
    return mins, maxs, pdead or qdead


# -------------------------------------------------------- cell projection


def exit_coordinate(r: float, slope: float) -> float:
    """Where the ray of the given slope from entry point ``r`` leaves the cell."""
    return kernels_exit(r, slope)


def kernels_exit(r: float, slope: float) -> float:
    from ._kernels_py import _exit

    return _exit(r, slope)


def project_interval(entry: Interval, min_slope: float, max_slope: float) -> Interval:
    """Exit-side image of an entry interval under the slope band."""
    return (exit_coordinate(entry[0], max_slope), exit_coordinate(entry[1], min_slope))


def exit_to_point(s: float) -> Tuple[float, float]:
    """Cell-local ``(x, y)`` of an exit coordinate."""
    return (s, 1.0) if s <= 1.0 else (1.0, 2.0 - s)


def entry_from_point(x: float, y: float) -> float:
    return 1.0 - y if x == 0.0 else 1.0 + x


# ------------------------------------------------------- simple decision


@dataclass
class SpeedRun:
    accept: bool
    counts: np.ndarray
    growth_ok: bool
    trace: Optional[Dict]


def _prepare(P, Q, profiles, eps):
    P = as_segment_curve(P, "P")
    Q = as_segment_curve(Q, "Q")
    n, m = len(P) - 1, len(Q) - 1
    mins, maxs, dead = slope_bounds(P, Q, profiles)
    g = CellGrid(P, Q, eps)
    origin = dist(P[0], Q[0]) ** 2 <= eps * eps * (1 + 1e-12) + 1e-20
    return P, Q, n, m, mins, maxs, dead, g, origin


def speed_simple_run(P, Q, profiles, eps: float, record: bool = False) -> SpeedRun:
    P, Q, n, m, mins, maxs, dead, g, origin = _prepare(P, Q, profiles, eps)
    if dead:
        return SpeedRun(False, np.zeros((n, m), dtype=np.int64), True, {} if record else None)
    acc, counts, growth, trace = kernels.speed_sweep(
        np.ascontiguousarray(g.lf), np.ascontiguousarray(g.bf), mins, maxs, bool(origin), bool(record)
    )
    return SpeedRun(bool(acc), counts, bool(growth), trace)


def decide_speed_simple(P, Q, profiles, eps: float) -> bool:
    """Cell-by-cell propagation of reachable intervals (cubic worst case)."""
    return speed_simple_run(P, Q, profiles, eps).accept


# ------------------------------------------------------ travel-time tables


class TravelTimeTables:
    """Cumulative traversal times at slowest and fastest speed for one curve.

    Times are kept as ``(number of stalled segments, finite part)`` so that
    differences across segments with zero minimum speed stay meaningful.
    """

    def __init__(self, umin: np.ndarray, umax: np.ndarray):
        with np.errstate(divide="ignore"):
            self.slow = np.where(umin > 0, 1.0 / np.where(umin > 0, umin, 1.0), inf)
            self.fast = np.where(np.isinf(umax), 0.0, 1.0 / np.where(umax > 0, umax, 1.0))
        self.fast = np.where(umax == 0, inf, self.fast)
        self.k = len(umin)
        self._tab = {}
        for name, per in (("slow", self.slow), ("fast", self.fast)):
            cnt = np.concatenate([[0], np.cumsum(np.isinf(per))])
            fin = np.concatenate([[0.0], np.cumsum(np.where(np.isinf(per), 0.0, per))])
            self._tab[name] = (cnt, fin)

    def per_unit(self, kind: str, seg: int) -> float:
        return (self.slow if kind == "slow" else self.fast)[seg]

    def vertex_time(self, kind: str, i: int) -> Tuple[int, float]:
        cnt, fin = self._tab[kind]
        return int(cnt[i]), float(fin[i])

    def time(self, kind: str, x0: float, x1: float) -> float:
        """Time to move from parameter ``x0`` to ``x1 >= x0``."""
        if x1 <= x0:
            return 0.0
        per = self.slow if kind == "slow" else self.fast
        i0 = min(int(np.floor(x0)), self.k - 1)
        i1 = min(int(np.floor(x1)), self.k - 1)
        if x1 == i1 and i1 > i0:
            i1 -= 1
        if i0 == i1:
            return _mul(x1 - x0, per[i0])
        head = _mul(i0 + 1 - x0, per[i0])
        tail = _mul(x1 - i1, per[i1])
        c0, f0 = self.vertex_time(kind, i0 + 1)
        c1, f1 = self.vertex_time(kind, i1)
        mid = inf if c1 > c0 else f1 - f0
        return head + mid + tail

    def advance(self, kind: str, x0: float, tau: float, seg: int) -> float:
        """Position reached from ``x0`` after time ``tau``, known to lie in ``seg``."""
        per = self.slow if kind == "slow" else self.fast
        base = max(x0, float(seg))
        spent = self.time(kind, x0, base)
        left = tau - spent
        if left <= 0.0 or isinf(per[seg]):
            x = base
        elif per[seg] == 0.0:
            x = seg + 1.0
        else:
            x = base + left / per[seg]
        return min(max(x, float(seg)), float(seg + 1))


def _mul(length: float, per: float) -> float:
    if length <= 0.0:
        return 0.0
    return length * per


class ChainProjector:
    """Follows the steepest and the flattest admissible chains through cells.

    The steepest chain moves along ``P`` at minimum and along ``Q`` at
    maximum speed; the flattest does the opposite.
    """

    def __init__(self, P, Q, profiles):
        P = as_segment_curve(P, "P")
        Q = as_segment_curve(Q, "Q")
        n, m = len(P) - 1, len(Q) - 1
        prof = _as_profiles(profiles, n, m)
        pmin, pmax, _ = parameter_speeds(P, prof.p_limits)
        qmin, qmax, _ = parameter_speeds(Q, prof.q_limits)
        self.tp = TravelTimeTables(pmin, pmax)
        self.tq = TravelTimeTables(qmin, qmax)
        self.n, self.m = n, m

    def _kinds(self, direction: str):
        return ("slow", "fast") if direction == "max" else ("fast", "slow")

    def exit_of(self, anchor: Tuple[float, float], cell: Tuple[int, int], direction: str) -> float:
        """Exit coordinate of the chain from ``anchor`` leaving ``cell``."""
        i, j = cell
        kp, kq = self._kinds(direction)
        ax, ay = anchor
        # already on the exit boundary; zero travel times must not move it
        if ax >= i + 1.0:
            return 1.0 + min(max(j + 1.0 - ay, 0.0), 1.0)
        if ay >= j + 1.0:
            return min(max(ax - i, 0.0), 1.0)
        tq = self.tq.time(kq, ay, j + 1.0)
        tp = self.tp.time(kp, ax, i + 1.0)
        if tq <= tp:
            x = self.tp.advance(kp, ax, tq, i) if tq < inf else ax
            return min(max(x - i, 0.0), 1.0)
        y = self.tq.advance(kq, ay, tp, j)
        return 1.0 + min(max(j + 1.0 - y, 0.0), 1.0)

    def min_max_projection(self, p: Tuple[float, float], edge: Tuple[str, int, int], direction: str):
        """Locate the chain image of ``p`` on the line through ``edge``.

        ``edge`` is ``("top", i, j)`` for the horizontal edge ``y = j``,
        ``i <= x <= i + 1`` or ``("right", i, j)`` for the vertical edge
        ``x = i``, ``j <= y <= j + 1``. Returns ``("before" | "on" | "after",
        point or None)``.
        """
        kind, i, j = edge
        kp, kq = self._kinds(direction)
        px, py = p
        if kind == "top":
            if py > j:
                return "after", None
            tq = self.tq.time(kq, py, float(j))
            t_lo = self.tp.time(kp, px, float(i)) if px < i else 0.0
            t_hi = self.tp.time(kp, px, i + 1.0) if px < i + 1 else 0.0
            if px > i + 1:
                return "after", None
            if tq < t_lo:
                return "before", None
            if tq > t_hi:
                return "after", None
            seg = min(i, self.n - 1)
            x = self.tp.advance(kp, px, tq, seg) if tq < inf else px
            return "on", (max(x, px), float(j))
        if px > i:
            return "after", None
        tp = self.tp.time(kp, px, float(i))
        t_lo = self.tq.time(kq, py, float(j)) if py < j else 0.0
        t_hi = self.tq.time(kq, py, j + 1.0) if py < j + 1 else 0.0
        if py > j + 1:
            return "after", None
        if tp < t_lo:
            return "before", None
        if tp > t_hi:
            return "after", None
        seg = min(j, self.m - 1)
        y = self.tq.advance(kq, py, tp, seg) if tp < inf else py
        return "on", (float(i), max(y, py))


def chain_walk_projection(P, Q, profiles, p, edge, direction: str, step: float = 1e-4):
    """Reference for :meth:`ChainProjector.min_max_projection` by explicit stepping."""
    proj = ChainProjector(P, Q, profiles)
    kp, kq = proj._kinds(direction)
    x, y = p
    kind, i, j = edge
    # walk cell by cell along the chain using exit coordinates
    while x < proj.n and y < proj.m:
        ci = min(int(np.floor(x)), proj.n - 1)
        cj = min(int(np.floor(y)), proj.m - 1)
        if kind == "top" and y >= j:
            break
        if kind == "right" and x >= i:
            break
        s = proj.exit_of((x, y), (ci, cj), direction)
        nx, ny = (ci + s, cj + 1.0) if s <= 1.0 else (ci + 1.0, cj + 2.0 - s)
        if kind == "top" and ny >= j:
            # interpolate along the straight piece
            t = 1.0 if ny == y else (j - y) / (ny - y)
            x, y = x + t * (nx - x), float(j)
            break
        if kind == "right" and nx >= i:
            t = 1.0 if nx == x else (i - x) / (nx - x)
            x, y = float(i), y + t * (ny - y)
            break
        if (nx, ny) == (x, y):
            break
        x, y = nx, ny
    # left the diagram before meeting the line: the crossing lies past the edge
    if kind == "top" and y < j and x >= proj.n:
        return "after", None
    if kind == "right" and x < i and y >= proj.m:
        return "after", None
    if kind == "top":
        if y != j:
            return "after" if y > j else "before", None
        if x < i:
            return "before", None
        if x > i + 1:
            return "after", None
        return "on", (x, float(j))
    if x != i:
        return "after" if x > i else "before", None
    if y < j:
        return "before", None
    if y > j + 1:
        return "after", None
    return "on", (float(i), y)


# ------------------------------------------------------ interval sequence


class _Node:
    __slots__ = ("item", "prio", "left", "right", "size")

    def __init__(self, item, prio):
        self.item = item
        self.prio = prio
        self.left = None
        self.right = None
        self.size = 1


def _size(t) -> int:
    return t.size if t is not None else 0


def _pull(t):
    t.size = 1 + _size(t.left) + _size(t.right)
    return t


def _join(a, b):
    if a is None:
        return b
    if b is None:
        return a
    if a.prio > b.prio:
        a.right = _join(a.right, b)
        return _pull(a)
    b.left = _join(a, b.left)
    return _pull(b)


def _split(t, k: int):
    """First ``k`` items to the left tree, the rest to the right."""
    if t is None:
        return None, None
    if _size(t.left) >= k:
        a, b = _split(t.left, k)
        t.left = b
        return a, _pull(t)
    a, b = _split(t.right, k - _size(t.left) - 1)
    t.right = a
    return _pull(t), b


class IntervalSequence:
    """Ordered sequence of reachable intervals with logarithmic split/join.

    Items are opaque; ordering is positional and maintained by the caller.
    :meth:`search` finds the first position where a monotone predicate holds.
    """

    def __init__(self, rng: Optional[random.Random] = None, root=None):
        self.rng = rng or random.Random(0)
        self.root = root

    def __len__(self) -> int:
        return _size(self.root)

    def _wrap(self, root) -> "IntervalSequence":
        return IntervalSequence(self.rng, root)

    def insert(self, pos: int, item) -> None:
        a, b = _split(self.root, pos)
        self.root = _join(_join(a, _Node(item, self.rng.random())), b)

    def append(self, item) -> None:
        self.root = _join(self.root, _Node(item, self.rng.random()))

    def delete(self, start: int, stop: int) -> None:
        a, rest = _split(self.root, start)
        _, c = _split(rest, stop - start)
        self.root = _join(a, c)

    def split(self, k: int) -> Tuple["IntervalSequence", "IntervalSequence"]:
        a, b = _split(self.root, k)
        self.root = None
        return self._wrap(a), self._wrap(b)

    def join(self, other: "IntervalSequence") -> "IntervalSequence":
        root = _join(self.root, other.root)
        self.root = other.root = None
        return self._wrap(root)

    def search(self, pred) -> int:
        """Number of leading items for which ``pred`` is false."""
        t = self.root
        pos = 0
        ans = len(self)
        while t is not None:
            if pred(t.item):
                ans = pos + _size(t.left)
                t = t.left
            else:
                pos += _size(t.left) + 1
                t = t.right
        return ans

    def at(self, k: int):
        t = self.root
        while t is not None:
            ls = _size(t.left)
            if k < ls:
                t = t.left
            elif k == ls:
                return t.item
            else:
                k -= ls + 1
                t = t.right
        raise IndexError(k)

    def items(self) -> List:
        out = []
        stack = []
        t = self.root
        while stack or t is not None:
            while t is not None:
                stack.append(t)
                t = t.left
            t = stack.pop()
            out.append(t.item)
            t = t.right
        return out


@dataclass(frozen=True)
class _Reach:
    # global anchor points of the two endpoints and the cell that created them
    left: Tuple[float, float]
    right: Tuple[float, float]
    origin: Tuple[int, int]


def _exit_point(cell: Tuple[int, int], s: float) -> Tuple[float, float]:
    i, j = cell
    if s <= 1.0:
        return (i + s, j + 1.0)
    return (i + 1.0, j + 2.0 - s)


def _clip_run(seq: IntervalSequence, ends, lo: float, hi: float, size: int):
    """Positions of the items landing inside ``[lo, hi]`` plus the two clipped pieces."""
    ka = seq.search(lambda it: ends(it)[0] >= lo - PTOL)
    kb = seq.search(lambda it: ends(it)[1] > hi + PTOL)
    head = tail = None
    if ka > 0:
        s2 = ends(seq.at(ka - 1))[1]
        if s2 >= lo - PTOL:
            head = (lo, min(hi, max(lo, s2)))
    if kb < size:
        s1 = ends(seq.at(kb))[0]
        if s1 <= hi + PTOL:
            tail = (min(hi, max(lo, s1)), hi)
    if head is not None and head == tail:
        tail = None
    return ka, kb, head, tail


def _assemble(rng, cell, head, kept: IntervalSequence, tail) -> IntervalSequence:
    out = IntervalSequence(rng)
    if head is not None:
        out.append(_Reach(_exit_point(cell, head[0]), _exit_point(cell, head[1]), cell))
    out = out.join(kept)
    if tail is not None:
        out.append(_Reach(_exit_point(cell, tail[0]), _exit_point(cell, tail[1]), cell))
    return out


def speed_fast_run(P, Q, profiles, eps: float, record: bool = False):
    """Lazy decision; returns ``(accept, trace)``."""
    P, Q, n, m, mins, maxs, dead, g, origin = _prepare(P, Q, profiles, eps)
    trace = {} if record else None
    if dead:
        return False, trace
    proj = ChainProjector(P, Q, profiles)
    rng = random.Random(12345)
    top_seq: List[Optional[IntervalSequence]] = [None] * n
    right_seq: List[IntervalSequence] = [IntervalSequence(rng) for _ in range(m)]
    accept = False
    for i in range(n):
        below = IntervalSequence(rng)
        for j in range(m):
            seq = right_seq[j].join(below)
            if i == 0 and j == 0 and origin:
                seq.insert(0, _Reach((0.0, 0.0), (0.0, 0.0), (0, 0)))
            cell = (i, j)
            cache: Dict[int, tuple] = {}

            def ends(it, cell=cell, cache=cache):
                # keep the item alive so its id cannot be recycled
                hit = cache.get(id(it))
                if hit is None or hit[0] is not it:
                    hit = (it, (
                        proj.exit_of(it.left, cell, "max"),
                        proj.exit_of(it.right, cell, "min"),
                    ))
                    cache[id(it)] = hit
                return hit[1]

            c, d = g.bf[i, j + 1]
            a, b = g.lf[i + 1, j]
            top_ok = c <= d
            right_ok = a <= b
            lo_r, hi_r = 2.0 - b, 2.0 - a
            size = len(seq)
            if top_ok:
                k1, k2, top_head, top_tail = _clip_run(seq, ends, c, d, size)
            else:
                k1 = k2 = 0
                top_head = top_tail = None
            if right_ok:
                k3, k4, right_head, right_tail = _clip_run(seq, ends, lo_r, hi_r, size)
            else:
                k3 = k4 = size
                right_head = right_tail = None
            k3 = max(k3, k2)
            k4 = max(k4, k3)
            # carve the kept runs out of the joined sequence
            head, rest = seq.split(k1)
            keep_top, rest = rest.split(max(k2 - k1, 0))
            _, rest = rest.split(max(k3 - max(k2, k1), 0))
            keep_right, _ = rest.split(max(k4 - k3, 0))
            top = _assemble(rng, cell, top_head, keep_top, top_tail)
            right = _assemble(rng, cell, right_head, keep_right, right_tail)
            # the top-right corner belongs to both exit sides
            corner = _exit_point(cell, 1.0)
            corner_item = _Reach(corner, corner, cell)
            if len(top) and right_ok and lo_r <= 1.0 + PTOL:
                if ends(top.at(len(top) - 1))[1] >= 1.0 - PTOL:
                    if not len(right) or ends(right.at(0))[0] > 1.0 + PTOL:
                        right.insert(0, corner_item)
            if len(right) and top_ok and d >= 1.0 - PTOL:
                if ends(right.at(0))[0] <= 1.0 + PTOL:
                    if not len(top) or ends(top.at(len(top) - 1))[1] < 1.0 - PTOL:
                        top.append(corner_item)
            if record:
                tops = _union_sorted([ends(it) for it in top.items()])
                rights = _union_sorted([ends(it) for it in right.items()])
                trace[cell] = (tops, [(x - 1.0, y - 1.0) for x, y in rights])
            if i == n - 1 and j == m - 1:
                accept = (len(top) > 0 and ends(top.at(len(top) - 1))[1] >= 1.0 - PTOL) or (
                    len(right) > 0 and ends(right.at(0))[0] <= 1.0 + PTOL
                )
            below = top
            right_seq[j] = right
    return accept, trace


def _union_sorted(ivs: List[Interval]) -> List[Interval]:
    out: List[List[float]] = []
    for lo, hi in sorted(ivs):
        if out and lo <= out[-1][1] + 1e-12:
            out[-1][1] = max(out[-1][1], hi)
        else:
            out.append([lo, hi])
    return [tuple(x) for x in out]


def decide_speed_fast(P, Q, profiles, eps: float) -> bool:
    """Lazy decision with split/join interval sequences."""
    return speed_fast_run(P, Q, profiles, eps)[0]


# ------------------------------------------------------ lower-bound family


def lower_bound_instance(n: int, delta: Optional[float] = None):
    """Instance whose last-row cells receive quadratically many intervals.

    ``P`` zig-zags over ``n`` unit horizontal segments through the origin and
    ``Q`` over ``n/2 + 1`` vertical ones, the first shortened by ``delta``.
    """
    if n < 4 or n % 2:
        raise ValueError("n must be an even integer >= 4")
    if delta is None:
        delta = 1e-4 / n
    P = np.array([[(-0.5 if k % 2 == 0 else 0.5), 0.0] for k in range(n + 1)])
    h = n // 2 + 1
    ys = [-0.5 + delta] + [(0.5 if k % 2 == 1 else -0.5) for k in range(1, h + 1)]
    Q = np.array([[0.0, y] for y in ys])
    p_lim = np.tile([1.0, 1.0], (n, 1))
    q_lim = [[2.0 / n, inf]] + [[n / 2, n / 2]] * (h - 2) + [[1.0 / n, 1.0 / n]]
    eps = float(np.sqrt(0.5 - delta + delta * delta))
    return P, Q, SpeedProfiles(p_lim, np.array(q_lim)), eps


def last_row_entry_counts(n: int) -> np.ndarray:
    P, Q, prof, eps = lower_bound_instance(n)
    run = speed_simple_run(P, Q, prof, eps)
    h = n // 2 + 1
    return run.counts[n // 2:, h - 1]


# ----------------------------------------------------- critical distances


def compute_potential_chains(seg_times: Sequence[float], t: float) -> List[Tuple[int, int]]:
    """Vertex pairs ``(i, j)`` where ``j`` is the first vertex with ``t <= time(i, j)``.

    ``seg_times[k]`` is the traversal time of segment ``k`` (may be ``inf``).
    Two forward-only pointers; empty when ``t`` exceeds the total time.
    """
    k = len(seg_times)
    cnt = [0]
    fin = [0.0]
    for s in seg_times:
        cnt.append(cnt[-1] + (1 if isinf(s) else 0))
        fin.append(fin[-1] + (0.0 if isinf(s) else s))

    def between(i, j):
        # prefix differences can land an ulp short of the true segment sum
        return inf if cnt[j] > cnt[i] else (fin[j] - fin[i]) * (1 + 1e-12)

    out: List[Tuple[int, int]] = []
    if not t <= between(0, k):
        return out
    i, j = 0, 1
    while i != k:
        if j > k:
            break
        if t <= between(i, j):
            out.append((i, j))
            i += 1
            if j <= i:
                j = i + 1
        else:
            j += 1
    return out


def _segment_times(curve: np.ndarray, limits: np.ndarray, which: int) -> List[float]:
    lengths = np.linalg.norm(np.diff(curve, axis=0), axis=1)
    out = []
    for L, v in zip(lengths, limits[:, which]):
        if L == 0:
            out.append(0.0)
        elif v == 0:
            out.append(inf)
        else:
            out.append(L / v)
    return out


def _solve_chain(A: np.ndarray, B: np.ndarray, R: np.ndarray, r_times: List[float], i0: int, i1: int, tau: float):
    """Minimum common distance for ``u`` on the first and ``v`` on the last edge.

    ``A``/``B`` are the two fixed vertices, ``R`` the chain's curve, the
    chain runs from vertex ``i0`` to ``i1`` of ``R``. Travel time from ``u``
    to ``v`` at the chain's speeds must equal ``tau``.
    """
    a, b = R[i0], R[i0 + 1]
    c, d = R[i1 - 1], R[i1]
    T1 = r_times[i0]
    Tk = r_times[i1 - 1]
    same = i1 - i0 == 1
    mid = 0.0
    if not same:
        mids = r_times[i0 + 1:i1 - 1]
        mid = inf if any(isinf(x) for x in mids) else float(sum(mids))
    if isinf(mid):
        return None

    # w(s) = alpha + beta * s, or a fixed s with w free
    pairs: List[Tuple[float, float]] = []
    if same:
        if isinf(T1) or T1 == 0:
            return None
        alpha, beta = tau / T1, 1.0
        fixed_s = None
    else:
        R0 = tau - mid
        if isinf(T1):
            fixed_s = 1.0
            if isinf(Tk) or Tk == 0:
                return None
            alpha, beta = R0 / Tk, 0.0
        elif isinf(Tk):
            if T1 == 0:
                return None
            fixed_s = 1.0 - R0 / T1
            alpha, beta = 0.0, 0.0
            pairs_w = [0.0]
        elif Tk == 0:
            if T1 == 0:
                return None
            fixed_s = 1.0 - R0 / T1
            alpha = beta = None
        else:
            alpha, beta = (R0 - T1) / Tk, T1 / Tk
            fixed_s = None

    def u_at(s):
        return a + s * (b - a)

    def v_at(w):
        return c + w * (d - c)

    def f(s, w):
        du = u_at(s) - A
        dv = v_at(w) - B
        return float(du @ du - dv @ dv)

    tol = 1e-9
    if fixed_s is not None:
        if fixed_s < -tol or fixed_s > 1 + tol:
            return None
        s = min(max(fixed_s, 0.0), 1.0)
        if alpha is None:
            # w free: solve |v(w) - B|^2 = |u(s) - A|^2
            target = float((u_at(s) - A) @ (u_at(s) - A))
            dv = d - c
            e = c - B
            qa, qb, qc = float(dv @ dv), 2 * float(e @ dv), float(e @ e) - target
            for w in _quad_roots(qa, qb, qc):
                pairs.append((s, w))
        else:
            pairs.append((s, alpha + beta * s))
    else:
        g0 = f(0.0, alpha)
        gh = f(0.5, alpha + 0.5 * beta)
        g1 = f(1.0, alpha + beta)
        qa = 2 * (g1 - 2 * gh + g0)
        qb = g1 - g0 - qa
        qc = g0
        for s in _quad_roots(qa, qb, qc):
            pairs.append((s, alpha + beta * s))
    best = None
    for s, w in pairs:
        if s < -tol or s > 1 + tol or w < -tol or w > 1 + tol:
            continue
        s = min(max(s, 0.0), 1.0)
        w = min(max(w, 0.0), 1.0)
        if same and w < s - tol:
            continue
        val = float(np.linalg.norm(u_at(s) - A))
        if best is None or val < best:
            best = val
    return best


def _quad_roots(qa: float, qb: float, qc: float) -> List[float]:
    scale = max(abs(qa), abs(qb), abs(qc), 1e-300)
    if abs(qa) <= 1e-14 * scale:
        if abs(qb) <= 1e-14 * scale:
            return []
        return [-qc / qb]
    disc = qb * qb - 4 * qa * qc
    if disc < 0:
        if disc > -1e-12 * qb * qb:
            disc = 0.0
        else:
            return []
    sq = np.sqrt(disc)
    q = -0.5 * (qb + (sq if qb >= 0 else -sq))
    roots = [q / qa]
    if q != 0:
        roots.append(qc / q)
    else:
        roots.append(0.0)
    return roots


def type_c_criticals_speed(P, Q, profiles) -> List[float]:
    """Distances where a chain at extreme speeds opens a new passage.

    For every vertex pair of one curve, traversed at maximum speed, the
    other curve is scanned at minimum speed for chains of matching travel
    time; on each chain the equal-distance, equal-time system is solved.
    """
    P = as_segment_curve(P, "P")
    Q = as_segment_curve(Q, "Q")
    prof = _as_profiles(profiles, len(P) - 1, len(Q) - 1)
    out: List[float] = []
    for X, xl, Y, yl in ((P, prof.p_limits, Q, prof.q_limits), (Q, prof.q_limits, P, prof.p_limits)):
        x_fast = _segment_times(X, xl, 1)
        y_slow = _segment_times(Y, yl, 0)
        pre = np.concatenate([[0.0], np.cumsum(x_fast)])
        for i, j in combinations(range(len(X)), 2):
            t = float(pre[j] - pre[i])
            if isinf(t) or np.isnan(t) or t <= 0:
                continue
            for k, l in compute_potential_chains(y_slow, t):
                val = _solve_chain(X[i], X[j], Y, y_slow, k, l, t)
                if val is not None:
                    out.append(val)
    return out


def critical_values_speed(P, Q, profiles) -> List[Tuple[float, str]]:
    P = as_segment_curve(P, "P")
    Q = as_segment_curve(Q, "Q")
    vals = [(c.value, c.kind) for c in critical_values_classic(P, Q, dedupe=False)]
    for X, Y in ((P, Q), (Q, P)):
        for x in X:
            for y in Y:
                vals.append((dist(x, y), "B"))
    vals += [(v, "C") for v in type_c_criticals_speed(P, Q, profiles)]
    vals.sort()
    out: List[Tuple[float, str]] = []
    for v, k in vals:
        if out and abs(v - out[-1][0]) <= 1e-12 * max(1.0, v):
            continue
        out.append((v, k))
    return out


def compute_speed_frechet_with_kind(P, Q, profiles):
    P = as_segment_curve(P, "P")
    Q = as_segment_curve(Q, "Q")
    prof = _as_profiles(profiles, len(P) - 1, len(Q) - 1)
    if slope_bounds(P, Q, prof)[2]:
        return inf, "none"
    crit = critical_values_speed(P, Q, prof)
    lower = max(dist(P[0], Q[0]), dist(P[-1], Q[-1]))

    def decide(e):
        return decide_speed_fast(P, Q, prof, e)

    vals = [v for v, _ in crit]
    kinds = [k for _, k in crit]
    if not decide(vals[-1] * (1 + 1e-9) + 1e-12) and not decide(1e6 * (1 + vals[-1])):
        return inf, "none"
    return search_critical(decide, vals, kinds, lower=lower, upper_hint=2 * vals[-1] + 1.0)


def compute_speed_frechet(P, Q, profiles) -> float:
    """Smallest leash length admitting a speed-feasible traversal (``inf`` if none)."""
    return compute_speed_frechet_with_kind(P, Q, profiles)[0]
