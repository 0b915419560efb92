# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the hot loops; see ``_kernels_py`` for the reference."""
from libc.math cimport sqrt, INFINITY
import numpy as np
cimport numpy as cnp

cdef double REL_SLACK = 1e-12
cdef double ABS_SLACK = 1e-20
cdef double PTOL = 1e-14


cdef inline void _ball(double ax, double ay, double bx, double by,
                       double cx, double cy, double lim,
                       double* lo_out, double* hi_out) noexcept nogil:
    cdef double dx = bx - ax, dy = by - ay, fx = ax - cx, fy = ay - cy
    cdef double dd = dx * dx + dy * dy
    cdef double tm, hx, hy, h2, half, lo, hi, ex, ey
    lo_out[0] = 1.0
    hi_out[0] = 0.0
    if dd == 0.0:
        if fx * fx + fy * fy <= lim:
            lo_out[0] = 0.0
            hi_out[0] = 1.0
        return
    tm = -(fx * dx + fy * dy) / dd
    hx = fx + tm * dx
    hy = fy + tm * dy
    h2 = hx * hx + hy * hy
    if h2 > lim:
        return
    half = sqrt((lim - h2) / dd)
    lo = tm - half
    hi = tm + half
    if lo > 1.0:
        ex = bx - cx
        ey = by - cy
        if ex * ex + ey * ey <= lim:
            lo_out[0] = 1.0
            hi_out[0] = 1.0
        return
    if hi < 0.0:
        if fx * fx + fy * fy <= lim:
            lo_out[0] = 0.0
            hi_out[0] = 0.0
        return
    lo_out[0] = lo if lo > 0.0 else 0.0
    hi_out[0] = hi if hi < 1.0 else 1.0


def decide_classic(double[:, ::1] P, double[:, ::1] Q, double eps):
    cdef Py_ssize_t n = P.shape[0] - 1, m = Q.shape[0] - 1, i, j
    cdef double lim = eps * eps + REL_SLACK * eps * eps + ABS_SLACK
    cdef double dx, dy, lo, hi, alo, ahi, clo, chi, nlo, nhi
    cdef double blo = 0.0, bhi = 0.0, brlo = 0.0, brhi = 0.0, tlo = 0.0, thi = 0.0, prev_bhi = 0.0
    cdef bint ok, bottom_ok = True, br_ok, l_ok, tok
    dx = P[0, 0] - Q[0, 0]
    dy = P[0, 1] - Q[0, 1]
    if dx * dx + dy * dy > lim:
        return False
    dx = P[n, 0] - Q[m, 0]
    dy = P[n, 1] - Q[m, 1]
    if dx * dx + dy * dy > lim:
        return False
    cdef double[::1] llo = np.ones(m)
    cdef double[::1] lhi = np.zeros(m)
    ok = True
    for j in range(m):
        _ball(Q[j, 0], Q[j, 1], Q[j + 1, 0], Q[j + 1, 1], P[0, 0], P[0, 1], lim, &lo, &hi)
        if ok and lo <= PTOL and lo <= hi:
            llo[j] = lo
            lhi[j] = hi
            ok = hi >= 1.0 - PTOL
        else:
            ok = False
    br_ok = False
    for i in range(n):
        _ball(P[i, 0], P[i, 1], P[i + 1, 0], P[i + 1, 1], Q[0, 0], Q[0, 1], lim, &lo, &hi)
        if i == 0:
            if lo <= PTOL and lo <= hi:
                blo = lo
                bhi = hi
                bottom_ok = True
            else:
                bottom_ok = False
        else:
            if bottom_ok and prev_bhi >= 1.0 - PTOL and lo <= PTOL and lo <= hi:
                blo = lo
                bhi = hi
            else:
                bottom_ok = False
        prev_bhi = bhi if bottom_ok else 0.0
        br_ok = bottom_ok
        brlo = blo
        brhi = bhi
        for j in range(m):
            l_ok = llo[j] <= lhi[j] + PTOL
            _ball(Q[j, 0], Q[j, 1], Q[j + 1, 0], Q[j + 1, 1], P[i + 1, 0], P[i + 1, 1], lim, &alo, &ahi)
            if alo > ahi:
                nlo = 1.0
                nhi = 0.0
            elif br_ok:
                nlo = alo
                nhi = ahi
            elif l_ok:
                nlo = alo if alo > llo[j] else llo[j]
                nhi = ahi
            else:
                nlo = 1.0
                nhi = 0.0
            _ball(P[i, 0], P[i, 1], P[i + 1, 0], P[i + 1, 1], Q[j + 1, 0], Q[j + 1, 1], lim, &clo, &chi)
            if clo > chi:
                tok = False
            elif l_ok:
                tok = True
                tlo = clo
                thi = chi
            elif br_ok:
                tlo = clo if clo > brlo else brlo
                thi = chi
                tok = tlo <= thi + PTOL
            else:
                tok = False
            llo[j] = nlo
            lhi[j] = nhi
            br_ok = tok
            if tok:
                brlo = tlo
                brhi = thi
    return bool(lhi[m - 1] + PTOL >= llo[m - 1] or br_ok)


def discrete_frechet(double[:, ::1] P, double[:, ::1] Q):
    cdef Py_ssize_t n = P.shape[0], m = Q.shape[0], d = P.shape[1], i, j, k
    cdef double[:, ::1] ca = np.empty((n, m))
    cdef double s, t, best
    for i in range(n):
        for j in range(m):
            s = 0.0
            for k in range(d):
                t = P[i, k] - Q[j, k]
                s += t * t
            s = sqrt(s)
            if i == 0 and j == 0:
                best = 0.0
            elif i == 0:
                best = ca[0, j - 1]
            elif j == 0:
                best = ca[i - 1, 0]
            else:
                best = ca[i - 1, j]
                if ca[i - 1, j - 1] < best:
                    best = ca[i - 1, j - 1]
                if ca[i, j - 1] < best:
                    best = ca[i, j - 1]
            ca[i, j] = s if s > best else best
    return float(ca[n - 1, m - 1])


cdef inline double _exit(double r, double sigma) noexcept nogil:
    cdef double x, y, xt, yr
    if r <= 1.0:
        x = 0.0
        y = 1.0 - r
    else:
        x = r - 1.0
        y = 0.0
    if sigma == INFINITY:
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


cdef list _union(list ivs):
    cdef list out = []
    cdef double lo, hi
    for lo, hi in ivs:
        if out and lo <= out[len(out) - 1][1] + PTOL:
            if hi > out[len(out) - 1][1]:
                out[len(out) - 1][1] = hi
        else:
            out.append([lo, hi])
    return out


def speed_sweep(double[:, :, ::1] lf, double[:, :, ::1] bf,
                double[:, ::1] mins, double[:, ::1] maxs, bint origin_ok, bint record):
    cdef Py_ssize_t n = mins.shape[0], m = mins.shape[1], i, j, nexit
    cdef cnp.ndarray counts = np.zeros((n, m), dtype=np.int64)
    cdef bint growth_ok = True, accept = False
    cdef double lo_s, hi_s, c, d, a, b, s1, s2, lo, hi
    cdef list ent, proj, tops, rights, right_cur
    cdef list top_out = [[None] * m for _ in range(n)]
    cdef list right_prev = [[] for _ in range(m)]
    trace = {} if record else None
    for i in range(n):
        right_cur = [None] * m
        for j in range(m):
            ent = [(w[0], w[1]) for w in right_prev[j]]
            if j > 0:
                for u in top_out[i][j - 1]:
                    ent.append((1.0 + u[0], 1.0 + u[1]))
            if i == 0 and j == 0 and origin_ok:
                ent.append((1.0, 1.0))
            ent.sort()
            ent = _union(ent)
            counts[i, j] = len(ent)
            lo_s = maxs[i, j]
            hi_s = mins[i, j]
            proj = [(_exit(e[0], lo_s), _exit(e[1], hi_s)) for e in ent]
            proj.sort()
            proj = _union(proj)
            c = bf[i, j + 1, 0]
            d = bf[i, j + 1, 1]
            a = lf[i + 1, j, 0]
            b = lf[i + 1, j, 1]
            tops = []
            rights = []
            for iv in proj:
                s1 = iv[0]
                s2 = iv[1]
                if c <= d:
                    lo = s1 if s1 > c else c
                    hi = s2 if s2 < d else d
                    if hi > 1.0:
                        hi = 1.0
                    if lo <= hi + PTOL:
                        tops.append((lo, lo if hi < lo else hi))
                if a <= b:
                    lo = s1 if s1 > 2.0 - b else 2.0 - b
                    if lo < 1.0:
                        lo = 1.0
                    hi = s2 if s2 < 2.0 - a else 2.0 - a
                    if lo <= hi + PTOL:
                        rights.append((lo - 1.0, (lo if hi < lo else hi) - 1.0))
            top_out[i][j] = tops
            right_cur[j] = rights
            nexit = len(tops) + len(rights)
            if tops and rights and tops[len(tops) - 1][1] >= 1.0 - PTOL and rights[0][0] <= PTOL:
                nexit -= 1
            if nexit > len(ent) + 1:
                growth_ok = False
            if record:
                trace[(i, j)] = (list(tops), list(rights))
            if i == n - 1 and j == m - 1:
                accept = (len(tops) > 0 and tops[len(tops) - 1][1] >= 1.0 - PTOL) or (
                    len(rights) > 0 and rights[0][0] <= PTOL)
        right_prev = right_cur
    return bool(accept), counts, bool(growth_ok), trace


def ray_shoot_up(double[::1] a, double[::1] b, bint closed):
    cdef Py_ssize_t m = a.shape[0], i, head = 0, tail = 0
    cdef cnp.ndarray[cnp.int64_t, ndim=1] up = np.full(m, -1, dtype=np.int64)
    cdef Py_ssize_t[::1] dq = np.zeros(max(m, 1), dtype=np.intp)
    cdef double ai, bi
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
