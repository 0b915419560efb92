"""Pure-Python versions of the hot loops.

Every function here has a twin in ``_kernels.pyx`` with the same signature
and results. The selector in :mod:`frechetlab.kernels` picks one at import.
"""
from math import inf, sqrt

import numpy as np

REL_SLACK = 1e-12
ABS_SLACK = 1e-20
PTOL = 1e-14


def _ball(ax, ay, bx, by, cx, cy, lim):
    # same arithmetic as geometry.segment_ball_interval, specialised to 2-D
    dx = bx - ax
    dy = by - ay
    fx = ax - cx
    fy = ay - cy
    dd = dx * dx + dy * dy
    if dd == 0.0:
        if fx * fx + fy * fy <= lim:
            return 0.0, 1.0
        return 1.0, 0.0
    tm = -(fx * dx + fy * dy) / dd
    hx = fx + tm * dx
    hy = fy + tm * dy
    h2 = hx * hx + hy * hy
    if h2 > lim:
        return 1.0, 0.0
    half = sqrt((lim - h2) / dd)
    lo = tm - half
    hi = tm + half
    if lo > 1.0:
        ex = bx - cx
        ey = by - cy
        if ex * ex + ey * ey <= lim:
            return 1.0, 1.0
        return 1.0, 0.0
    if hi < 0.0:
        if fx * fx + fy * fy <= lim:
            return 0.0, 0.0
        return 1.0, 0.0
    return max(lo, 0.0), min(hi, 1.0)


def decide_classic(P, Q, eps):
    """Monotone free-space reachability for 2-D float arrays ``P`` and ``Q``."""
    n = P.shape[0] - 1
    m = Q.shape[0] - 1
    lim = eps * eps + REL_SLACK * eps * eps + ABS_SLACK
    dx = P[0, 0] - Q[0, 0]
    dy = P[0, 1] - Q[0, 1]
    if dx * dx + dy * dy > lim:
        return False
    dx = P[n, 0] - Q[m, 0]
    dy = P[n, 1] - Q[m, 1]
    if dx * dx + dy * dy > lim:
        return False
    # reachable part of the left edge of every cell in the current column
    llo = [1.0] * m
    lhi = [0.0] * m
    ok = True
    for j in range(m):
        lo, hi = _ball(Q[j, 0], Q[j, 1], Q[j + 1, 0], Q[j + 1, 1], P[0, 0], P[0, 1], lim)
        if ok and lo <= PTOL and lo <= hi:
            llo[j], lhi[j] = lo, hi
            ok = hi >= 1.0 - PTOL
        else:
            ok = False
    blo, bhi = 0.0, 0.0
    bottom_ok = True
    for i in range(n):
        # bottom edge of cell (i, 0)
        lo, hi = _ball(P[i, 0], P[i, 1], P[i + 1, 0], P[i + 1, 1], Q[0, 0], Q[0, 1], lim)
        if i == 0:
            if lo <= PTOL and lo <= hi:
                blo, bhi = lo, hi
                bottom_ok = True
            else:
                bottom_ok = False
        else:
            if bottom_ok and prev_bhi >= 1.0 - PTOL and lo <= PTOL and lo <= hi:
                blo, bhi = lo, hi
            else:
                bottom_ok = False
        prev_bhi = bhi if bottom_ok else 0.0
        br_ok = bottom_ok
        brlo, brhi = blo, bhi
        for j in range(m):
            l_ok = llo[j] <= lhi[j] + PTOL
            # right edge of the cell
            alo, ahi = _ball(Q[j, 0], Q[j, 1], Q[j + 1, 0], Q[j + 1, 1], P[i + 1, 0], P[i + 1, 1], lim)
            if alo > ahi:
                nlo, nhi = 1.0, 0.0
            elif br_ok:
                nlo, nhi = alo, ahi
            elif l_ok:
                nlo, nhi = max(alo, llo[j]), ahi
            else:
                nlo, nhi = 1.0, 0.0
            # top edge of the cell
            clo, chi = _ball(P[i, 0], P[i, 1], P[i + 1, 0], P[i + 1, 1], Q[j + 1, 0], Q[j + 1, 1], lim)
            if clo > chi:
                tok = False
            elif l_ok:
                tok = True
                tlo, thi = clo, chi
            elif br_ok:
                tlo, thi = max(clo, brlo), chi
                tok = tlo <= thi + PTOL
            else:
                tok = False
            llo[j], lhi[j] = nlo, nhi
            br_ok = tok
            if tok:
                brlo, brhi = tlo, thi
    return lhi[m - 1] + PTOL >= llo[m - 1] or br_ok


def discrete_frechet(P, Q):
    n = P.shape[0]
    m = Q.shape[0]
    D = np.sqrt(((P[:, None, :] - Q[None, :, :]) ** 2).sum(axis=2))
    ca = [[0.0] * m for _ in range(n)]
    for i in range(n):
        for j in range(m):
            d = D[i, j]
            if i == 0 and j == 0:
                best = 0.0
            elif i == 0:
                best = ca[0][j - 1]
            elif j == 0:
                best = ca[i - 1][0]
            else:
                best = min(ca[i - 1][j], ca[i - 1][j - 1], ca[i][j - 1])
            ca[i][j] = d if d > best else best
    return float(ca[n - 1][m - 1])


def _exit(r, sigma):
    # entry coordinate r in [0,2] -> exit coordinate s in [0,2] along slope sigma
    if r <= 1.0:
        x = 0.0
        y = 1.0 - r
    else:
        x = r - 1.0
        y = 0.0
    if sigma == inf:
        return x
    if sigma == 0.0:
        return 2.0 - y
    xt = x + (1.0 - y) / sigma
    if xt <= 1.0:
        return xt
    yr = y + sigma * (1.0 - x)
    if yr > 1.0:
        yr = 1.0
    return 2.0 - yr


def _union(ivs):
    out = []
    for lo, hi in ivs:
        if out and lo <= out[-1][1] + PTOL:
            if hi > out[-1][1]:
                out[-1][1] = hi
        else:
            out.append([lo, hi])
    return out


def speed_sweep(lf, bf, mins, maxs, origin_ok, record):
    """Cell-by-cell propagation of reachable intervals under slope bounds.

    Returns ``(accept, counts, growth_ok, trace)`` where ``counts[i, j]`` is
    the number of reachable intervals on the entry sides of cell ``(i, j)``
    and ``trace`` maps cells to their exit intervals when ``record`` is set.
    """
    n = mins.shape[0]
    m = mins.shape[1]
    counts = np.zeros((n, m), dtype=np.int64)
    growth_ok = True
    trace = {} if record else None
    top_out = [[None] * m for _ in range(n)]
    right_prev = [[] for _ in range(m)]
    accept = False
    for i in range(n):
        right_cur = [None] * m
        for j in range(m):
            ent = [(w1, w2) for (w1, w2) in right_prev[j]]
            if j > 0:
                ent.extend((1.0 + u1, 1.0 + u2) for (u1, u2) in top_out[i][j - 1])
            if i == 0 and j == 0 and origin_ok:
                ent.append((1.0, 1.0))
            ent.sort()
            ent = _union(ent)
            counts[i, j] = len(ent)
            lo_s = maxs[i, j]
            hi_s = mins[i, j]
            proj = _union(sorted((_exit(a, lo_s), _exit(b, hi_s)) for a, b in ent))
            c, d = bf[i, j + 1, 0], bf[i, j + 1, 1]
            a, b = lf[i + 1, j, 0], lf[i + 1, j, 1]
            tops = []
            rights = []
            for s1, s2 in proj:
                if c <= d:
                    lo = max(s1, c)
                    hi = min(s2, d, 1.0)
                    if lo <= hi + PTOL:
                        tops.append((lo, max(lo, hi)))
                if a <= b:
                    lo = max(s1, 2.0 - b, 1.0)
                    hi = min(s2, 2.0 - a)
                    if lo <= hi + PTOL:
                        rights.append((lo - 1.0, max(lo, hi) - 1.0))
            top_out[i][j] = tops
            right_cur[j] = rights
            nexit = len(tops) + len(rights)
            if tops and rights and tops[-1][1] >= 1.0 - PTOL and rights[0][0] <= PTOL:
                nexit -= 1
            if nexit > len(ent) + 1:
                growth_ok = False
            if record:
                trace[(i, j)] = ([tuple(t) for t in tops], [tuple(r) for r in rights])
            if i == n - 1 and j == m - 1:
                accept = (bool(tops) and tops[-1][1] >= 1.0 - PTOL) or (
                    bool(rights) and rights[0][0] <= PTOL
                )
        right_prev = right_cur
    return accept, counts, growth_ok, trace


def ray_shoot_up(a, b, closed):
    """Deque-based upward ray shooting over left/right attached segments.

    Level ``i`` holds ``s_i = [0, a[i]]`` and ``t_i = [b[i], 1]``. For every
    ``s_i`` the result is ``2*k`` when the first segment hit above its right
    endpoint is ``s_k``, ``2*k + 1`` for ``t_k`` and ``-1`` when nothing is hit.
    ``closed`` selects whether touching an endpoint counts as a hit.
    """
    m = a.shape[0]
    up = np.full(m, -1, dtype=np.int64)
    dq = [0] * m
    head = 0
    tail = 0
    for i in range(m):
        ai = a[i]
        bi = b[i]
        if closed:
            while tail > head and a[dq[tail - 1]] <= ai:
                tail -= 1
                up[dq[tail]] = 2 * i
            while tail > head and a[dq[head]] >= bi:
                up[dq[head]] = 2 * i + 1
                head += 1
        else:
            while tail > head and a[dq[tail - 1]] < ai:
                tail -= 1
                up[dq[tail]] = 2 * i
            while tail > head and a[dq[head]] > bi:
                up[dq[head]] = 2 * i + 1
                head += 1
        dq[tail] = i
        tail += 1
    return up
