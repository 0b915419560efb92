"""Matching a curve against a point set.

Given points ``S`` and a curve ``P``, decide whether some polygonal curve
whose vertices are taken from ``S`` (repeats allowed) lies within Fréchet
distance ``eps`` of ``P``. Cylinders are the ``eps``-neighbourhoods of the
segments of ``P``; they are numbered ``1..n`` in the public API, with ``0``
meaning "unreachable".
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .classic import _bisector_hits, decide_frechet, search_critical
from .fsmap import strip_blocks
from .geometry import PTOL, as_curve, as_segment_curve, dist, point_segment_distance, segment_ball_interval, sq_slack

_START = ("start",)


@dataclass
class CpmInstance:
    """Point set ``S``, curve ``P`` and distance ``eps``.

    ``all_points`` asks :func:`verify_feasible` to also require that every
    point of ``S`` is visited. The decision procedure ignores it.
    """

    S: np.ndarray
    P: np.ndarray
    eps: float
    all_points: bool = False
    labels: Optional[Dict[str, int]] = None
    cylinders: List[List[Optional[Tuple[float, float]]]] = field(init=False, repr=False)

    def __post_init__(self):
        self.S = as_curve(self.S, "S")
        self.P = as_segment_curve(self.P, "P")
        if self.S.shape[1] != self.P.shape[1]:
            raise ValueError("S and P must have the same dimension")
        self.eps = float(self.eps)
        if not np.isfinite(self.eps) or self.eps < 0:
            raise ValueError("eps must be a finite non-negative number")
        self.cylinders = [
            [segment_ball_interval(self.P[c], self.P[c + 1], s, self.eps) for s in self.S]
            for c in range(self.n)
        ]

    @property
    def n(self) -> int:
        return len(self.P) - 1

    @property
    def k(self) -> int:
        return len(self.S)

    def members(self, i: int) -> List[int]:
        """Indices of points inside cylinder ``i`` (1-based)."""
        return [v for v, iv in enumerate(self.cylinders[i - 1]) if iv is not None]

    def near(self, v: int, x) -> bool:
        d = self.S[v] - np.asarray(x, float)
        return float(d @ d) <= self.eps * self.eps + sq_slack(self.eps)


def reach_pointers(u: int, v: int, inst: CpmInstance) -> np.ndarray:
    """``ri[i-1]``: last cylinder at which ``v`` is reachable via the segment ``u -> v``.

    The walk starts at ``u`` placed at the first point of cylinder ``i``
    within ``eps`` of it. Zero means ``v`` is not reachable that way.
    """
    n = inst.n
    P, a, b, eps = inst.P, inst.S[u], inst.S[v], inst.eps
    edges = np.array([_pack(segment_ball_interval(a, b, P[x], eps)) for x in range(n + 1)])
    blocks = strip_blocks(edges)
    cyl = inst.cylinders
    # last_v[x]: largest cell c < x with v inside cylinder c, else -1
    last_v = np.full(n + 1, -1, dtype=np.int64)
    for c in range(n):
        last_v[c + 1] = c if cyl[c][v] is not None else last_v[c]
    out = np.zeros(n, dtype=np.int64)
    for c in range(n):
        iu = cyl[c][u]
        if iu is None:
            continue
        best = int(last_v[blocks[c]])
        if best > c:
            out[c] = best + 1
        elif cyl[c][v] is not None and cyl[c][v][1] >= iu[0] - PTOL:
            out[c] = c + 1
    return out


def _pack(iv):
    return (1.0, 0.0) if iv is None else iv


@dataclass
class ReachState:
    """Outcome of the decision sweep with everything needed to rebuild a curve."""

    accept: bool
    furthest: np.ndarray
    reachable: List[List[int]]
    entry_from: Dict[Tuple[int, int], tuple]
    added_from: Dict[Tuple[int, int], int]
    final: Optional[int]


def cpm_run(inst: CpmInstance) -> ReachState:
    n, k = inst.n, inst.k
    cyl = inst.cylinders
    furthest = np.zeros(k, dtype=np.int64)
    back: List[tuple] = [_START] * k
    for v in range(k):
        if inst.near(v, inst.P[0]):
            furthest[v] = 1
    ri: Dict[int, np.ndarray] = {}

    def pointers(u: int, v: int) -> np.ndarray:
        key = u * k + v
        if key not in ri:
            ri[key] = reach_pointers(u, v, inst)
        return ri[key]

    reachable: List[List[int]] = [[v for v in range(k) if furthest[v]]]
    entry_from: Dict[Tuple[int, int], tuple] = {}
    added_from: Dict[Tuple[int, int], int] = {}
    for i in range(1, n + 1):
        row = cyl[i - 1]
        members = [v for v in range(k) if row[v] is not None]
        entries = [v for v in members if furthest[v] >= i]
        for v in entries:
            entry_from[(v, i)] = back[v]
        now = list(entries)
        if entries:
            w = min(entries, key=lambda x: row[x][0])
            q = row[w][0]
            inside = set(entries)
            for v in members:
                if v not in inside and q <= row[v][1] + PTOL:
                    now.append(v)
                    added_from[(v, i)] = w
        reachable.append(now)
        for u in now:
            for v in range(k):
                r = int(pointers(u, v)[i - 1])
                if r > furthest[v]:
                    furthest[v] = r
                    back[v] = (u, i)
    final = next((v for v in reachable[n] if inst.near(v, inst.P[n])), None)
    return ReachState(final is not None, furthest, reachable, entry_from, added_from, final)


def cpm_decide(inst: CpmInstance) -> bool:
    """Whether a curve through ``S`` lies within ``eps`` of ``P``."""
    return cpm_run(inst).accept


def vertex_bound(inst: CpmInstance) -> int:
    return 2 * min(inst.n, inst.k) + 2


def cpm_reconstruct(inst: CpmInstance, state: Optional[ReachState] = None) -> Optional[np.ndarray]:
    """A witness curve as an array of points of ``S``, or ``None``."""
    state = state or cpm_run(inst)
    if not state.accept:
        return None
    v, i = state.final, inst.n
    seq = [v]
    while True:
        w = state.added_from.get((v, i))
        if w is not None:
            v = w
            seq.append(v)
        src = state.entry_from[(v, i)]
        if src is _START:
            break
        v, i = src
        seq.append(v)
    seq.reverse()
    idx = [x for j, x in enumerate(seq) if j == 0 or x != seq[j - 1]]
    idx = _simplify(inst, idx)
    return inst.S[idx]


def _simplify(inst: CpmInstance, idx: List[int]) -> List[int]:
    # only when over the size bound: drop vertices while the curve still matches
    j = 0
    while len(idx) > vertex_bound(inst) and j < len(idx):
        trial = idx[:j] + idx[j + 1:]
        trial = [x for t, x in enumerate(trial) if t == 0 or x != trial[t - 1]]
        if decide_frechet(inst.P, inst.S[trial], inst.eps):
            idx = trial
        else:
            j += 1
    return idx


def cpm_critical_values(S, P) -> List[float]:
    S = as_curve(S, "S")
    P = as_segment_curve(P, "P")
    vals: List[float] = []
    segs = [(P[c], P[c + 1]) for c in range(len(P) - 1)]
    for s in S:
        vals.extend(dist(s, p) for p in P)
        vals.extend(point_segment_distance(s, a, b) for a, b in segs)
    for x, y in combinations(range(len(S)), 2):
        a, b = S[x], S[y]
        for p, q in segs:
            h = _bisector_hits(a, b, p, q)
            if h is not None:
                vals.append(dist(h, a))
        for p in P:
            vals.append(point_segment_distance(p, a, b))
        for kx, ky in combinations(range(len(P)), 2):
            h = _bisector_hits(P[kx], P[ky], a, b)
            if h is not None:
                vals.append(dist(h, P[kx]))
    return sorted(set(vals))


def cpm_optimize(S, P) -> float:
    """Smallest ``eps`` for which :func:`cpm_decide` accepts."""
    S = as_curve(S, "S")
    P = as_segment_curve(P, "P")
    lower = max(min(dist(s, P[0]) for s in S), min(dist(s, P[-1]) for s in S))

    def decide(e: float) -> bool:
        return cpm_decide(CpmInstance(S, P, e))

    vals = cpm_critical_values(S, P)
    return search_critical(decide, vals, lower=lower, upper_hint=2 * vals[-1] + 1.0)[0]


def verify_feasible(Q, inst: CpmInstance, check_members: bool = True, tol: float = 1e-12) -> bool:
    """Vertices of ``Q`` come from ``S`` (all of ``S`` under ``all_points``) and ``Q`` matches ``P``."""
    Q = as_curve(Q, "Q")
    if Q.shape[1] != inst.S.shape[1]:
        return False
    if check_members:
        used = set()
        for q in Q:
            d = np.linalg.norm(inst.S - q, axis=1)
            hit = np.flatnonzero(d <= tol)
            if len(hit) == 0:
                return False
            used.update(int(h) for h in hit)
        if inst.all_points and len(used) < inst.k:
            return False
    return decide_frechet(inst.P, Q, inst.eps)


def curve_of_indices(inst: CpmInstance, idx: Sequence[int]) -> np.ndarray:
    return inst.S[list(idx)]
