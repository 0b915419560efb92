"""Slow brute-force references used to check the real algorithms."""
from __future__ import annotations

from itertools import product
from typing import Iterator, Sequence

import numpy as np
from scipy import ndimage

from .geometry import as_segment_curve


def sample_curve(C: np.ndarray, r: int) -> np.ndarray:
    """Points of ``C`` at parameters ``0, 1/r, 2/r, ...``."""
    k = C.shape[0] - 1
    t = np.arange(k * r + 1) / r
    i = np.minimum(np.floor(t).astype(int), k - 1)
    f = (t - i)[:, None]
    return (1 - f) * C[i] + f * C[i + 1]


def sampled_free_space(P, Q, eps: float, r: int) -> np.ndarray:
    P = as_segment_curve(P, "P")
    Q = as_segment_curve(Q, "Q")
    A = sample_curve(P, r)
    B = sample_curve(Q, r)
    d2 = ((A[:, None, :] - B[None, :, :]) ** 2).sum(axis=2)
    return d2 <= eps * eps


def _monotone_reach(feas: np.ndarray) -> np.ndarray:
    nx, ny = feas.shape
    reach = np.zeros_like(feas)
    idx = np.arange(ny)
    prev = None
    for x in range(nx):
        f = feas[x]
        seed = np.zeros(ny, dtype=bool)
        if prev is None:
            seed[0] = True
        else:
            seed |= prev
            seed[1:] |= prev[:-1]
        seed &= f
        last_block = np.maximum.accumulate(np.where(~f, idx, -1))
        last_seed = np.maximum.accumulate(np.where(seed, idx, -1))
        col = f & (last_seed > last_block)
        reach[x] = col
        prev = col
    return reach


def grid_bfs_decide(P, Q, eps: float, r: int = 64, monotone: bool = True) -> bool:
    """Path search over a sampled free space.

    Only trustworthy when ``eps`` stays clear of every critical value.
    """
    if r < 8:
        raise ValueError("resolution must be at least 8")
    feas = sampled_free_space(P, Q, eps, r)
    if not (feas[0, 0] and feas[-1, -1]):
        return False
    if monotone:
        return bool(_monotone_reach(feas)[-1, -1])
    lab, _ = ndimage.label(feas, structure=np.ones((3, 3), dtype=int))
    return bool(lab[0, 0] == lab[-1, -1])


def _slopes_ok(dx, dy, lo, hi):
    with np.errstate(divide="ignore", invalid="ignore"):
        s = np.where(dx > 0, dy / np.where(dx > 0, dx, 1.0), np.inf)
    s = np.where((dx == 0) & (dy == 0), np.nan, s)
    ok = (s >= lo) & (s <= hi)
    return ok | np.isnan(s)


def slope_grid_decide(P, Q, slope_bounds, eps: float, r: int = 16, slack: float = 0.0) -> bool:
    """Sampled search for slope-constrained monotone paths.

    ``slope_bounds`` is an ``(n, m, 2)`` array of per-cell ``(minS, maxS)``.
    A positive ``slack`` widens every band by a factor ``1 + slack`` and the
    leash by the same factor; a negative one shrinks the bands. Straight
    moves are allowed between any two sample points of one closed cell, so
    one hop per cell suffices (a chain of permitted slopes stays permitted).
    """
    if r < 16:
        raise ValueError("resolution must be at least 16")
    P = as_segment_curve(P, "P")
    Q = as_segment_curve(Q, "Q")
    n, m = P.shape[0] - 1, Q.shape[0] - 1
    e = eps * (1 + max(slack, 0.0))
    feas = sampled_free_space(P, Q, e, r)
    reach = np.zeros_like(feas)
    reach[0, 0] = feas[0, 0]
    g = np.arange(r + 1)
    gx, gy = np.meshgrid(g, g, indexing="ij")
    fac = 1.0 + slack
    for i in range(n):
        for j in range(m):
            lo, hi = slope_bounds[i][j]
            lo = lo / fac if fac > 0 else 0.0
            hi = hi * fac if fac > 0 else np.inf
            xs = slice(i * r, i * r + r + 1)
            ys = slice(j * r, j * r + r + 1)
            sub_r = reach[xs, ys]
            sub_f = feas[xs, ys]
            src = np.argwhere(sub_r)
            if len(src) == 0:
                continue
            tgt = np.argwhere(sub_f)
            dx = tgt[:, None, 0] - src[None, :, 0]
            dy = tgt[:, None, 1] - src[None, :, 1]
            ok = (dx >= 0) & (dy >= 0) & _slopes_ok(dx.astype(float), dy.astype(float), lo, hi)
            hit = ok.any(axis=1)
            sub_r[tgt[hit, 0], tgt[hit, 1]] = True
            reach[xs, ys] = sub_r
    return bool(reach[-1, -1])


def enumerate_pointset_curves(S: Sequence, max_len: int, cover_all: bool = False) -> Iterator[np.ndarray]:
    """All vertex sequences over ``S`` with 1 to ``max_len`` vertices."""
    if max_len > 12:
        raise ValueError("max_len is capped at 12")
    S = np.asarray(S, float)
    k = len(S)
    for length in range(1, max_len + 1):
        for seq in product(range(k), repeat=length):
            if cover_all and len(set(seq)) < k:
                continue
            yield S[list(seq)]


def bisect_threshold(decide, lo: float, hi: float, tol: float = 1e-10) -> float:
    """Smallest value where a monotone ``decide`` flips to true."""
    while not decide(hi):
        lo, hi = hi, 2 * hi + 1.0
    while hi - lo > tol * max(1.0, hi):
        mid = 0.5 * (lo + hi)
        if decide(mid):
            hi = mid
        else:
            lo = mid
    return hi


def naive_ray_shoot(a, b, closed: bool = True):
    """Quadratic reference for upward ray shooting (codes as the kernel)."""
    m = len(a)
    up = [-1] * m
    for i in range(m):
        x = a[i]
        for k in range(i + 1, m):
            hit_s = a[k] >= x if closed else a[k] > x
            hit_t = b[k] <= x if closed else b[k] < x
            if hit_s:
                up[i] = 2 * k
                break
            if hit_t:
                up[i] = 2 * k + 1
                break
    return up
