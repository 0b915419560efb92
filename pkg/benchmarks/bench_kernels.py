"""Time the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--sizes 16 32 64] [--repeat 3]

Covers the classical decision sweep, the discrete DP, the speed-limited
interval sweep and upward ray shooting. Free-space propagation through
the ray-shooting kernel is timed end to end via ``build_free_space_map``.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from frechetlab import _kernels_py, kernels
from frechetlab.classic import compute_frechet
from frechetlab.fsmap import build_free_space_map
from frechetlab.speed import SpeedProfiles, _prepare

try:
    from frechetlab import _kernels as _compiled
except ImportError:  # pragma: no cover
    _compiled = None


def _walk(rng, n):
    return np.cumsum(rng.normal(size=(n + 1, 2)), axis=0)


def _best(fn, repeat):
    out = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        out.append(time.perf_counter() - t0)
    return min(out)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[16, 32, 64])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    impls = [("python", _kernels_py)] + ([("cython", _compiled)] if _compiled else [])
    print(f"active backend: {kernels.BACKEND}")
    print(f"{'kernel':<14}{'n':>6}" + "".join(f"{name:>12}" for name, _ in impls))
    for n in args.sizes:
        P, Q = _walk(rng, n), _walk(rng, n)
        eps = compute_frechet(P, Q) * 1.01
        prof = SpeedProfiles(np.tile([0.2, 5.0], (n, 1)), np.tile([0.2, 5.0], (n, 1)))
        _, _, _, _, mins, maxs, _, g, origin = _prepare(P, Q, prof, eps * 2)
        lf, bf = np.ascontiguousarray(g.lf), np.ascontiguousarray(g.bf)
        a = rng.uniform(0, 1, 4 * n)
        b = rng.uniform(0, 1, 4 * n)
        rows = {
            "decide": lambda k: k.decide_classic(P, Q, eps),
            "discrete": lambda k: k.discrete_frechet(P, Q),
            "speed_sweep": lambda k: k.speed_sweep(lf, bf, mins, maxs, bool(origin), False),
            "ray_shoot": lambda k: k.ray_shoot_up(a, b, False),
        }
        for name, fn in rows.items():
            times = [_best(lambda k=k: fn(k), args.repeat) for _, k in impls]
            print(f"{name:<14}{n:>6}" + "".join(f"{t * 1e3:>10.2f}ms" for t in times))
        t = _best(lambda: build_free_space_map(P, Q, eps), args.repeat)
        print(f"{'fsmap(active)':<14}{n:>6}{t * 1e3:>10.2f}ms")


if __name__ == "__main__":
    main()
