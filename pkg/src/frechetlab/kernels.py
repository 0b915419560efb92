"""Pick the compiled kernels when available, else the pure-Python ones.

Set ``FRECHETLAB_PURE=1`` to force the fallback.
"""
import os

from . import _kernels_py

BACKEND = "python"
_impl = _kernels_py
if not os.environ.get("FRECHETLAB_PURE"):
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:  # pragma: no cover - depends on the build
        _impl = _kernels_py

decide_classic = _impl.decide_classic
discrete_frechet = _impl.discrete_frechet
speed_sweep = _impl.speed_sweep
ray_shoot_up = _impl.ray_shoot_up

__all__ = ["BACKEND", "decide_classic", "discrete_frechet", "speed_sweep", "ray_shoot_up"]
