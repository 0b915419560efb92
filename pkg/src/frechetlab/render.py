"""Deterministic SVG drawings of free-space diagrams."""
from __future__ import annotations

from typing import List, Optional, Sequence, Tuple

import numpy as np

from .classic import reach_intervals
from .fsmap import ContractViolation, build_free_space_map
from .geometry import as_segment_curve, point_segment_distance, sq_slack

MAX_CELLS = 10_000
CELL = 60.0
MARGIN = 20.0


def _fmt(x: float) -> str:
    s = f"{x:.3f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def _row(a, b, q, eps: float) -> Optional[Tuple[float, float]]:
    d = b - a
    dd = float(d @ d)
    lim = eps * eps + sq_slack(eps)
    if dd == 0.0:
        return (0.0, 1.0) if float((a - q) @ (a - q)) <= lim else None
    tm = float((q - a) @ d) / dd
    foot = a + tm * d - q
    h2 = float(foot @ foot)
    if h2 > lim:
        return None
    half = np.sqrt((lim - h2) / dd)
    lo, hi = max(tm - half, 0.0), min(tm + half, 1.0)
    return (lo, hi) if lo <= hi else None


def cell_region(p0, p1, q0, q1, eps: float, resolution: int = 32) -> List[Tuple[float, float]]:
    """Polygon ``[(s, t), ...]`` approximating the feasible part of one cell.

    The region is convex, so it is traced as the left ends of its
    horizontal slices going up followed by the right ends coming down.
    The first and last feasible slice heights are refined by bisection.
    """
    p0, p1, q0, q1 = (np.asarray(z, float) for z in (p0, p1, q0, q1))

    def feasible(t: float) -> bool:
        q = q0 + t * (q1 - q0)
        return point_segment_distance(q, p0, p1) ** 2 <= eps * eps + sq_slack(eps)

    ts = list(np.linspace(0.0, 1.0, resolution + 1))
    ok = [feasible(t) for t in ts]
    if not any(ok):
        return []
    first = ok.index(True)
    last = len(ok) - 1 - ok[::-1].index(True)
    lo_t, hi_t = ts[first], ts[last]
    if first > 0:
        a, b = ts[first - 1], ts[first]
        for _ in range(40):
            mid = 0.5 * (a + b)
            a, b = (a, mid) if feasible(mid) else (mid, b)
        lo_t = b
    if last < len(ts) - 1:
        a, b = ts[last], ts[last + 1]
        for _ in range(40):
            mid = 0.5 * (a + b)
            a, b = (mid, b) if feasible(mid) else (a, mid)
        hi_t = a
    levels = [lo_t] + [t for t in ts if lo_t < t < hi_t] + [hi_t]
    left, right = [], []
    for t in levels:
        iv = _row(p0, p1, q0 + t * (q1 - q0), eps)
        if iv is None:
            continue
        left.append((iv[0], t))
        right.append((iv[1], t))
    return left + right[::-1]


def render_free_space_svg(
    P,
    Q,
    eps: float,
    resolution: int = 32,
    reachable: bool = True,
    queries: Sequence[float] = (),
) -> str:
    """SVG of the diagram: grid, shaded feasible cells, reachable edges, optional query results."""
    P = as_segment_curve(P, "P")
    Q = as_segment_curve(Q, "Q")
    n, m = len(P) - 1, len(Q) - 1
    if n * m > MAX_CELLS:
        raise ContractViolation(f"diagram has {n * m} cells, the limit is {MAX_CELLS}")
    W, H = 2 * MARGIN + n * CELL, 2 * MARGIN + m * CELL

    def X(s: float) -> str:
        return _fmt(MARGIN + s * CELL)

    def Y(t: float) -> str:
        return _fmt(MARGIN + (m - t) * CELL)

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{_fmt(W)}" height="{_fmt(H)}" '
        f'viewBox="0 0 {_fmt(W)} {_fmt(H)}">',
        f"<title>free space, eps={eps!r}</title>",
        f'<rect x="{X(0)}" y="{Y(m)}" width="{_fmt(n * CELL)}" height="{_fmt(m * CELL)}" fill="white" stroke="black"/>',
        '<g id="free" fill="#9ecae1" stroke="none">',
    ]
    for i in range(n):
        for j in range(m):
            poly = cell_region(P[i], P[i + 1], Q[j], Q[j + 1], eps, resolution)
            if len(poly) < 2:
                continue
            pts = " ".join(f"{X(i + s)},{Y(j + t)}" for s, t in poly)
            out.append(f'<polygon data-cell="{i},{j}" points="{pts}"/>')
    out.append("</g>")
    out.append('<g id="grid" stroke="#888" stroke-width="0.5">')
    out += [f'<line x1="{X(i)}" y1="{Y(0)}" x2="{X(i)}" y2="{Y(m)}"/>' for i in range(1, n)]
    out += [f'<line x1="{X(0)}" y1="{Y(j)}" x2="{X(n)}" y2="{Y(j)}"/>' for j in range(1, m)]
    out.append("</g>")
    if reachable:
        r = reach_intervals(P, Q, eps)
        out.append('<g id="reachable" stroke="#d62728" stroke-width="3">')
        for i in range(n + 1):
            for j in range(m):
                lo, hi = r.lr[i, j]
                if lo <= hi:
                    out.append(f'<line x1="{X(i)}" y1="{Y(j + lo)}" x2="{X(i)}" y2="{Y(j + hi)}"/>')
        for i in range(n):
            for j in range(m + 1):
                lo, hi = r.br[i, j]
                if lo <= hi:
                    out.append(f'<line x1="{X(i + lo)}" y1="{Y(j)}" x2="{X(i + hi)}" y2="{Y(j)}"/>')
        out.append("</g>")
    if queries:
        fsm = build_free_space_map(P, Q, eps)
        out.append('<g id="queries" stroke="#2ca02c" stroke-width="2" fill="#2ca02c">')
        for u in queries:
            try:
                res = fsm.query(float(u))
            except ContractViolation:
                # start point outside the free space: hollow marker only
                out.append(f'<circle cx="{X(u)}" cy="{Y(0)}" r="3" fill="none"/>')
                continue
            out.append(f'<circle cx="{X(u)}" cy="{Y(0)}" r="3"/>')
            if res is not None:
                lo, hi = res
                out.append(f'<line x1="{X(u)}" y1="{Y(0)}" x2="{X(lo)}" y2="{Y(m)}" stroke-dasharray="4 2"/>')
                out.append(f'<line x1="{X(lo)}" y1="{Y(m)}" x2="{X(hi)}" y2="{Y(m)}"/>')
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render_instance_svg(P, points: Optional[np.ndarray] = None, Q=None) -> str:
    """Plain drawing of curves (and an optional point set) in the plane."""
    P = as_segment_curve(P, "P")
    parts = [P] + ([np.asarray(Q, float)] if Q is not None else []) + ([np.asarray(points, float)] if points is not None else [])
    allp = np.vstack([x[:, :2] for x in parts])
    lo, hi = allp.min(axis=0), allp.max(axis=0)
    span = max(float(np.max(hi - lo)), 1e-9)
    scale = 400.0 / span

    def pt(p) -> str:
        return f"{_fmt(MARGIN + (p[0] - lo[0]) * scale)},{_fmt(MARGIN + (hi[1] - p[1]) * scale)}"

    size = _fmt(2 * MARGIN + 400.0)
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size}" height="{size}">',
        f'<polyline id="P" fill="none" stroke="#1f77b4" stroke-width="2" points="{" ".join(pt(p) for p in P)}"/>',
    ]
    if Q is not None:
        out.append(f'<polyline id="Q" fill="none" stroke="#ff7f0e" stroke-width="2" points="{" ".join(pt(p) for p in np.asarray(Q, float))}"/>')
    if points is not None:
        for p in np.asarray(points, float):
            x, y = pt(p).split(",")
            out.append(f'<circle cx="{x}" cy="{y}" r="3" fill="black"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
