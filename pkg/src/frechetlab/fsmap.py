"""Free-space map: reachable sets of every row plus lookup tables.

The diagram is laid out with ``P`` along x (``0..n``) and ``Q`` along y.
Row ``j`` is the horizontal line ``y = j``; the strip between rows ``j`` and
``j + 1`` is crossed by the vertical cell edges ``x = 0..n``. Reachability
starts from every feasible point of row 0, so the map describes all partial
matchings of ``Q`` against subcurves of ``P`` at once.
"""
from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import kernels
from .geometry import CellGrid

Interval = Tuple[float, float]
MERGE_TOL = 1e-12


class ContractViolation(ValueError):
    """Input is well-formed but violates an operation's precondition."""


# ------------------------------------------------------------- primitives


def ray_shoot_up(a: Sequence[float], b: Sequence[float], closed: bool = False) -> List[Optional[Tuple[str, int]]]:
    """First obstacle above the right end of every ``[0, a[i]]`` segment.

    Level ``i`` carries the left-attached segment ``[0, a[i]]`` and the
    right-attached segment ``[b[i], 1]``. The answer per level is
    ``("S", k)``, ``("T", k)`` or ``None``.
    """
    codes = kernels.ray_shoot_up(np.ascontiguousarray(a, float), np.ascontiguousarray(b, float), bool(closed))
    out: List[Optional[Tuple[str, int]]] = []
    for c in codes:
        c = int(c)
        out.append(None if c < 0 else ("S" if c % 2 == 0 else "T", c // 2))
    return out


def topmost_reachable(a: Sequence[float], b: Sequence[float], up=None) -> List[int]:
    """Level of the right-attached segment that finally stops a path from ``s_i``.

    A path starting at the top of ``s_i`` moves upward and may slide right
    over any ``s_k`` it meets; it stops at the first ``t_k`` in its way. A
    level with ``a > b`` is closed and stops everything at itself. When
    nothing stops the path the answer is the last level.
    """
    m = len(a)
    if up is None:
        up = ray_shoot_up(a, b, closed=False)
    top = [m - 1] * m
    for i in range(m - 1, -1, -1):
        if a[i] > b[i]:
            top[i] = i
        elif up[i] is None:
            top[i] = m - 1
        elif up[i][0] == "T":
            top[i] = up[i][1]
        else:
            top[i] = top[up[i][1]]
    return top


def strip_blocks(edges: np.ndarray) -> np.ndarray:
    """For every cell ``c`` of a strip, the first vertical edge a path from its bottom cannot cross.

    ``edges`` has shape ``(n + 1, 2)``: feasible parts of the edges
    ``x = 0..n``, empty when ``lo > hi``. The result lies in ``c+1..n``;
    ``n`` means every cell to the right is open.
    """
    n = len(edges) - 1
    a = np.array(edges[1:, 0], float)
    b = np.array(edges[1:, 1], float)
    # the last edge is never an obstacle
    a[-1], b[-1] = 0.0, 1.0
    top = topmost_reachable(a, b)
    blocks = np.empty(n, dtype=np.int64)
    for c in range(n):
        k = c  # index of edge c+1 in a/b
        if a[k] > b[k]:
            blocks[c] = c + 1
        else:
            blocks[c] = top[k] + 1
    return blocks


def row_intervals(cells: np.ndarray) -> List[Interval]:
    """Merged feasible intervals of a row given per-cell parameter ranges."""
    out: List[List[float]] = []
    for c, (lo, hi) in enumerate(cells):
        if lo > hi:
            continue
        lo, hi = c + float(lo), c + float(hi)
        if out and lo <= out[-1][1] + MERGE_TOL:
            out[-1][1] = max(out[-1][1], hi)
        else:
            out.append([lo, hi])
    return [(lo, hi) for lo, hi in out]


class _Row:
    """Sorted disjoint intervals with next/previous point lookups."""

    def __init__(self, ivs: List[Interval]):
        self.ivs = ivs
        self.los = [lo for lo, _ in ivs]
        self.his = [hi for _, hi in ivs]

    def __bool__(self) -> bool:
        return bool(self.ivs)

    def next_point(self, x: float) -> Optional[float]:
        k = bisect_left(self.his, x - MERGE_TOL)
        if k == len(self.ivs):
            return None
        return max(self.los[k], x)

    def prev_point(self, x: float) -> Optional[float]:
        k = bisect_right(self.los, x + MERGE_TOL) - 1
        if k < 0:
            return None
        return min(self.his[k], x)

    def containing(self, x: float) -> Optional[int]:
        k = bisect_left(self.his, x - MERGE_TOL)
        if k < len(self.ivs) and self.los[k] - MERGE_TOL <= x:
            return k
        return None

    def contains(self, x: float) -> bool:
        return self.containing(x) is not None


def cell_of(x: float, n: int) -> int:
    return min(int(np.floor(x)), n - 1)


def split_by_cell(ivs: Sequence[Interval], n: int) -> List[Tuple[int, float, float]]:
    """Cut intervals at integer x; a boundary point goes to both sides."""
    out = []
    for lo, hi in ivs:
        c = cell_of(lo, n)
        while True:
            end = min(hi, c + 1.0)
            out.append((c, max(lo, float(c)), end))
            if hi <= c + 1.0 or c == n - 1:
                break
            c += 1
    return out


@dataclass
class Takeoff:
    """Points of one cell piece whose reach into the next row is non-empty."""

    lo: float
    hi: float
    right: float  # rightmost point reachable on the next row
    source: int  # index into the row's interval list


def propagate_row(prev: Sequence[Interval], blocks: np.ndarray, top: _Row, n: int):
    """Reachable set on the next row and the take-off pieces of ``prev``.

    From ``x`` in cell ``c`` the next row is reachable exactly on
    ``F ∩ [x, R_c]`` with ``R_c`` the last feasible point before the first
    blocked edge.
    """
    limits: List[Optional[float]] = [top.prev_point(float(blocks[c])) for c in range(n)]
    takeoffs: List[Takeoff] = []
    spans: List[List[float]] = []
    for idx, (lo, hi) in enumerate(prev):
        for c, plo, phi in split_by_cell([(lo, hi)], n):
            if plo > phi:
                continue
            # a point sitting on x = c+1 belongs to the next cell
            R = limits[c]
            if R is None or R < plo - MERGE_TOL:
                continue
            first = top.next_point(plo)
            if first is None or first > R + MERGE_TOL:
                continue
            takeoffs.append(Takeoff(plo, min(phi, R), R, idx))
            if spans and plo <= spans[-1][1] + MERGE_TOL:
                spans[-1][1] = max(spans[-1][1], R)
            else:
                spans.append([plo, R])
    nxt: List[Interval] = []
    i = k = 0
    F = top.ivs
    while i < len(spans) and k < len(F):
        lo = max(spans[i][0], F[k][0])
        hi = min(spans[i][1], F[k][1])
        if lo <= hi + MERGE_TOL:
            hi = max(lo, hi)
            if nxt and lo <= nxt[-1][1] + MERGE_TOL:
                nxt[-1] = (nxt[-1][0], max(nxt[-1][1], hi))
            else:
                nxt.append((lo, hi))
        if spans[i][1] < F[k][1]:
            i += 1
        else:
            k += 1
    return nxt, takeoffs


# ------------------------------------------------------------------ map


@dataclass
class _Piece:
    lo: float
    hi: float
    lo_open: bool
    hi_open: bool
    identity: bool
    value: Optional[float]  # leftmost reachable point on the last row


@dataclass
class FreeSpaceMap:
    n: int
    m: int
    grid: CellGrid
    feasible: List[_Row]
    reach: List[_Row]
    blocks: List[np.ndarray]
    takeoffs: List[List[Takeoff]]
    right_end: List[Optional[float]] = field(default_factory=list)
    columns: List[List[_Piece]] = field(default_factory=list)

    # -- tables ---------------------------------------------------------

    def _first_takeoff(self, j: int, x: float) -> Optional[float]:
        t = self.takeoffs[j]
        k = bisect_left([o.hi for o in t], x - MERGE_TOL)
        if k == len(t):
            return None
        return max(t[k].lo, x)

    def leftmost_reachable_after(self, j: int, x: float) -> Optional[float]:
        """Leftmost point of row ``j + 1`` reachable from take-off points ``>= x`` of row ``j``."""
        p = self._first_takeoff(j, x)
        return None if p is None else self.feasible[j + 1].next_point(p)

    def rightmost_takeoff_before(self, j: int, x: float) -> Optional[Takeoff]:
        """Take-off piece holding the last take-off point ``<= x`` of row ``j``."""
        t = self.takeoffs[j]
        k = bisect_right([o.lo for o in t], x + MERGE_TOL) - 1
        if k < 0:
            return None
        return t[k]

    # -- queries --------------------------------------------------------

    def _start_interval(self, u: float) -> int:
        k = self.feasible[0].containing(u)
        if k is None:
            raise ContractViolation(f"start point x={u!r} is not feasible on the bottom row")
        return k

    def walk(self, u: float, upto: Optional[int] = None) -> Optional[Tuple[float, float]]:
        """``(lp, rp)`` of row ``upto`` (default last) by a row-by-row walk."""
        k = self._start_interval(u)
        upto = self.m if upto is None else upto
        left, right = float(u), self.feasible[0].his[k]
        for j in range(upto):
            p1 = self._first_takeoff(j, left)
            tk = self.rightmost_takeoff_before(j, right)
            if p1 is None or tk is None or p1 > min(tk.hi, right) + MERGE_TOL:
                return None
            left, right = self.feasible[j + 1].next_point(p1), tk.right
        return left, right

    def query(self, u: float) -> Optional[Tuple[float, float]]:
        """Table lookup of ``(lp, rp)`` on the last row; falls back to :meth:`walk` on cell borders."""
        k = self._start_interval(u)
        if u == np.floor(u):
            return self.walk(u)
        rp = self.right_end[k]
        if rp is None:
            return None
        pieces = self.columns[cell_of(u, self.n)]
        idx = bisect_right([p.lo for p in pieces], u) - 1
        if idx < 0:
            return self.walk(u)
        pc = pieces[idx]
        if u == pc.lo or u == pc.hi or u > pc.hi:
            return self.walk(u)
        if pc.identity:
            return u, rp
        if pc.value is None:
            return None
        return pc.value, rp

    def reachable_from(self, u: float) -> List[Interval]:
        """Reachable part of the last row from ``u`` as explicit intervals."""
        r = self.walk(u)
        if r is None:
            return []
        lo, hi = r
        out = []
        for a, b in self.reach[self.m].ivs:
            x, y = max(a, lo), min(b, hi)
            if x <= y + MERGE_TOL:
                out.append((x, max(x, y)))
        return out


def _column_pieces(fsm: FreeSpaceMap, c: int) -> List[_Piece]:
    g = fsm.grid
    m = fsm.m
    A, D = c + g.bf[c, 0, 0], c + g.bf[c, 0, 1]
    if A > D:
        return []
    spans = [(A, D)]
    for j in range(1, m + 1):
        lo, hi = g.bf[c, j]
        if lo > hi:
            break
        A2, D2 = max(spans[-1][0], c + lo), min(spans[-1][1], c + hi)
        if A2 > D2:
            break
        spans.append((A2, D2))
    pieces: List[_Piece] = []
    top = len(spans) - 1
    right_side: List[_Piece] = []
    for k in range(top):
        (A1, D1), (A2, D2) = spans[k], spans[k + 1]
        if A2 > A1:
            pieces.append(_Piece(A1, A2, False, True, False, None))
        if D1 > D2:
            right_side.append(_Piece(D2, D1, True, False, False, None))
    if top == m:
        pieces.append(_Piece(spans[top][0], spans[top][1], False, False, True, None))
    else:
        pieces.append(_Piece(spans[top][0], spans[top][1], False, False, False, None))
    pieces.extend(reversed(right_side))
    for pc in pieces:
        if pc.identity:
            continue
        rep = 0.5 * (pc.lo + pc.hi)
        if rep == np.floor(rep) and pc.lo < pc.hi:
            rep = pc.lo + 0.25 * (pc.hi - pc.lo)
        r = fsm.walk(rep)
        pc.value = None if r is None else r[0]
    return pieces


def build_free_space_map(P, Q, eps: float, improved: bool = True) -> FreeSpaceMap:
    g = CellGrid(P, Q, eps)
    n, m = g.n, g.m
    feasible = [_Row(row_intervals(g.bf[:, j])) for j in range(m + 1)]
    reach = [feasible[0]]
    blocks: List[np.ndarray] = []
    takeoffs: List[List[Takeoff]] = []
    for j in range(m):
        bl = strip_blocks(g.lf[:, j])
        nxt, tk = propagate_row(reach[j].ivs, bl, feasible[j + 1], n)
        blocks.append(bl)
        takeoffs.append(tk)
        reach.append(_Row(nxt))
    fsm = FreeSpaceMap(n, m, g, feasible, reach, blocks, takeoffs)
    if improved:
        for lo, _ in feasible[0].ivs:
            r = fsm.walk(lo)
            fsm.right_end.append(None if r is None else r[1])
        fsm.columns = [_column_pieces(fsm, c) for c in range(n)]
    return fsm
