"""Partial matching, closed curves, longest/shortest matched walks, DAG matching."""
from __future__ import annotations

from dataclasses import dataclass
from graphlib import CycleError, TopologicalSorter
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .classic import _bisector_hits, critical_values_classic, decide_frechet, search_critical
from .fsmap import (
    MERGE_TOL,
    ContractViolation,
    FreeSpaceMap,
    Takeoff,
    _Row,
    build_free_space_map,
    propagate_row,
    row_intervals,
    strip_blocks,
)
from .geometry import (
    arc_length_between,
    as_curve,
    as_segment_curve,
    dist,
    point_segment_distance,
    segment_ball_interval,
    subcurve,
)


def _crit_search(decide, values: Sequence[float], kinds=None, lower: float = 0.0):
    vals = sorted(values)
    return search_critical(decide, vals, kinds, lower=lower, upper_hint=2 * (vals[-1] if vals else 1.0) + 1.0)


# ------------------------------------------------------------ partial


@dataclass(frozen=True)
class SubcurveMatch:
    start: float
    end: float
    length: float


def partial_match(P, Q, eps: float) -> Optional[SubcurveMatch]:
    """Some subcurve of ``P`` within ``eps`` of all of ``Q``, or ``None``."""
    P = as_segment_curve(P, "P")
    fsm = build_free_space_map(P, Q, eps, improved=False)
    for lo, _ in fsm.feasible[0].ivs:
        r = fsm.walk(lo)
        if r is not None:
            return SubcurveMatch(lo, r[1], arc_length_between(P, lo, r[1]))
    return None


def partial_match_decide(P, Q, eps: float) -> bool:
    return partial_match(P, Q, eps) is not None


def partial_match_optimize(P, Q) -> float:
    P = as_segment_curve(P, "P")
    Q = as_segment_curve(Q, "Q")
    crit = critical_values_classic(P, Q)
    lower = max(min(point_segment_distance(Q[0], P[i], P[i + 1]) for i in range(len(P) - 1)),
                min(point_segment_distance(Q[-1], P[i], P[i + 1]) for i in range(len(P) - 1)))
    return _crit_search(lambda e: partial_match_decide(P, Q, e), [c.value for c in crit], lower=lower)[0]


# ------------------------------------------------------------ walks


def max_walk(P, Q, eps: float) -> Optional[SubcurveMatch]:
    """Longest subcurve of ``P`` (by arc length) matching ``Q``."""
    P = as_segment_curve(P, "P")
    fsm = build_free_space_map(P, Q, eps)
    best = None
    for (lo, _), rp in zip(fsm.feasible[0].ivs, fsm.right_end):
        if rp is None:
            continue
        cand = SubcurveMatch(lo, rp, arc_length_between(P, lo, rp))
        if best is None or cand.length > best.length:
            best = cand
    return best


def _min_candidates(fsm: FreeSpaceMap):
    """Start points that can realize the shortest matched walk."""
    for c, pieces in enumerate(fsm.columns):
        for pc in pieces:
            if pc.identity:
                yield pc.lo, pc.lo
            elif pc.value is not None:
                yield pc.hi, pc.value
        for x in (float(c), float(c + 1)):
            if fsm.feasible[0].contains(x):
                r = fsm.walk(x)
                if r is not None:
                    yield x, r[0]


def min_walk(P, Q, eps: float) -> Optional[SubcurveMatch]:
    """Shortest subcurve of ``P`` (by arc length) matching ``Q``."""
    P = as_segment_curve(P, "P")
    fsm = build_free_space_map(P, Q, eps)
    best = None
    for s, e in _min_candidates(fsm):
        if e < s - MERGE_TOL:
            continue
        e = max(s, e)
        cand = SubcurveMatch(s, e, arc_length_between(P, s, e))
        if best is None or cand.length < best.length:
            best = cand
    return best


# ------------------------------------------------------------ closed curves


def _require_closed(C: np.ndarray, name: str) -> None:
    if len(C) < 2 or not np.allclose(C[0], C[-1], rtol=0.0, atol=1e-12):
        raise ContractViolation(f"{name} must be closed (first vertex equal to last)")


def doubled(P: np.ndarray) -> np.ndarray:
    return np.vstack([P, P[1:]])


def rotate(P: np.ndarray, t: float) -> np.ndarray:
    """Closed curve ``P`` re-parametrized to start at parameter ``t``."""
    n = len(P) - 1
    return subcurve(doubled(P), t, t + n)


def _intersect(ivs: List[Tuple[float, float]], lo: float, hi: float) -> List[Tuple[float, float]]:
    out = []
    for a, b in ivs:
        x, y = max(a, lo), min(b, hi)
        if x <= y:
            out.append((x, y))
    return out


def closed_match(P, Q, eps: float) -> Optional[float]:
    """A shift ``t`` such that ``P`` started at ``t`` is within ``eps`` of ``Q``."""
    P = as_segment_curve(P, "P")
    Q = as_segment_curve(Q, "Q")
    _require_closed(P, "P")
    _require_closed(Q, "Q")
    n = len(P) - 1
    fsm = build_free_space_map(doubled(P), Q, eps)
    top = [(a - n, b - n) for a, b in fsm.reach[fsm.m].ivs]

    def check(t: float) -> bool:
        if t < 0 or t > n or not fsm.feasible[0].contains(t):
            return False
        r = fsm.walk(t)
        if r is None:
            return False
        end = t + n
        return r[0] - MERGE_TOL <= end <= r[1] + MERGE_TOL and fsm.reach[fsm.m].contains(end)

    for c in range(n + 1):
        if check(float(c)):
            return float(c)
    for k, (lo, hi) in enumerate(fsm.feasible[0].ivs):
        rp = fsm.right_end[k]
        if rp is None or lo > n:
            continue
        for c in range(int(np.floor(lo)), min(int(np.ceil(hi)), n)):
            for pc in fsm.columns[c]:
                if pc.lo < lo - MERGE_TOL or pc.hi > hi + MERGE_TOL:
                    continue
                if not pc.identity and pc.value is None:
                    continue
                left = pc.lo if pc.identity else max(pc.lo, pc.value - n)
                cands = _intersect(top, max(left, pc.lo), min(pc.hi, rp - n, float(n)))
                for a, b in cands:
                    for t in (0.5 * (a + b), a, b):
                        if check(t):
                            return t
    return None


def closed_frechet_decide(P, Q, eps: float) -> bool:
    return closed_match(P, Q, eps) is not None


def closed_frechet_optimize(P, Q) -> float:
    P = as_segment_curve(P, "P")
    Q = as_segment_curve(Q, "Q")
    _require_closed(P, "P")
    _require_closed(Q, "Q")
    crit = critical_values_classic(doubled(P), Q)
    return _crit_search(lambda e: closed_frechet_decide(P, Q, e), [c.value for c in crit])[0]


# ------------------------------------------------------------ DAG matching


@dataclass
class GeometricDag:
    vertices: np.ndarray
    edges: List[Tuple[int, int]]

    def __post_init__(self):
        self.vertices = as_curve(self.vertices, "vertices")
        k = len(self.vertices)
        clean = []
        for e in self.edges:
            a, b = int(e[0]), int(e[1])
            if not (0 <= a < k and 0 <= b < k):
                raise ValueError(f"edges: vertex index out of range in {e!r}")
            clean.append((a, b))
        self.edges = clean

    def topological_order(self) -> List[int]:
        ts = TopologicalSorter({v: [] for v in range(len(self.vertices))})
        for a, b in self.edges:
            ts.add(b, a)
        try:
            return list(ts.static_order())
        except CycleError as exc:
            raise ContractViolation("graph contains a cycle") from exc

    def predecessors(self) -> Dict[int, List[int]]:
        pred: Dict[int, List[int]] = {v: [] for v in range(len(self.vertices))}
        for a, b in self.edges:
            pred[b].append(a)
        return pred


def _vertex_row(P: np.ndarray, v: np.ndarray, eps: float) -> _Row:
    cells = np.array([_pack(segment_ball_interval(P[c], P[c + 1], v, eps)) for c in range(len(P) - 1)])
    return _Row(row_intervals(cells))


def _pack(iv):
    return (1.0, 0.0) if iv is None else iv


def dag_match(P, G: GeometricDag, eps: float) -> Optional[List[int]]:
    """Vertex path of ``G`` within ``eps`` of ``P`` (vertex to vertex), or ``None``."""
    P = as_segment_curve(P, "P")
    n = len(P) - 1
    order = G.topological_order()
    pred = G.predecessors()
    V = G.vertices
    rows: Dict[int, _Row] = {}
    reach: Dict[int, List[Tuple[float, float]]] = {}
    start: Dict[int, Optional[Tuple[float, float]]] = {}
    links: Dict[int, List[Tuple[int, List[Takeoff]]]] = {}
    for v in order:
        F = _vertex_row(P, V[v], eps)
        rows[v] = F
        parts: List[Tuple[float, float]] = []
        start[v] = None
        if F and F.los[0] <= 0.0:
            start[v] = F.ivs[0]
            parts.append(F.ivs[0])
        links[v] = []
        for u in pred[v]:
            if not reach[u]:
                continue
            edges = np.array([_pack(segment_ball_interval(V[u], V[v], P[k], eps)) for k in range(n + 1)])
            nxt, tk = propagate_row(reach[u], strip_blocks(edges), F, n)
            links[v].append((u, tk))
            parts.extend(nxt)
        reach[v] = _merge(parts)
    for v in order:
        if reach[v] and reach[v][-1][1] >= n - MERGE_TOL:
            return _trace_back(v, float(n), start, links)
    return None


def _merge(parts: List[Tuple[float, float]]) -> List[Tuple[float, float]]:
    out: List[List[float]] = []
    for lo, hi in sorted(parts):
        if out and lo <= out[-1][1] + MERGE_TOL:
            out[-1][1] = max(out[-1][1], hi)
        else:
            out.append([lo, hi])
    return [(a, b) for a, b in out]


def _trace_back(v: int, x: float, start, links) -> List[int]:
    path = [v]
    while True:
        s = start[v]
        if s is not None and x <= s[1] + MERGE_TOL:
            return path[::-1]
        found = None
        for u, tk in links[v]:
            for t in tk:
                if t.lo <= x + MERGE_TOL and x <= t.right + MERGE_TOL:
                    found = (u, t.lo)
                    break
            if found:
                break
        if found is None:  # pragma: no cover - reachability guarantees a source
            raise RuntimeError("lost track of the reachable path")
        v, x = found
        path.append(v)


def dag_match_decide(P, G: GeometricDag, eps: float) -> Tuple[bool, Optional[np.ndarray]]:
    path = dag_match(P, G, eps)
    if path is None:
        return False, None
    return True, G.vertices[path]


def dag_critical_values(P, G: GeometricDag) -> List[float]:
    P = as_segment_curve(P, "P")
    V = G.vertices
    vals = []
    for a, b in G.edges:
        vals += [c.value for c in critical_values_classic(P, np.array([V[a], V[b]]))]
    for v in V:
        for p in P:
            vals.append(dist(p, v))
        for i in range(len(P) - 1):
            vals.append(point_segment_distance(v, P[i], P[i + 1]))
    for x, y in combinations(range(len(V)), 2):
        for i in range(len(P) - 1):
            q = _bisector_hits(V[x], V[y], P[i], P[i + 1])
            if q is not None:
                vals.append(dist(q, V[x]))
    return vals


def dag_match_optimize(P, G: GeometricDag) -> float:
    P = as_segment_curve(P, "P")
    G.topological_order()
    return _crit_search(lambda e: dag_match(P, G, e) is not None, dag_critical_values(P, G))[0]
