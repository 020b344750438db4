"""Numba switch.

Hot kernels are compiled with numba unless ``TIMEVORTEX_NUMBA=0`` is set in
the environment (or numba cannot be imported). Kernels that vectorise well
then switch to numpy versions kept next to them; the rest run uncompiled.
"""
import os

_flag = os.environ.get("TIMEVORTEX_NUMBA", "1").strip().lower()
_requested = _flag not in ("0", "false", "no", "off")

try:
    if not _requested:
        raise ImportError
    import numba

    def njit(*args, **kw):
        kw.setdefault("cache", True)
        kw.setdefault("nogil", True)
        return numba.njit(*args, **kw)

    USE_NUMBA = True
except ImportError:
    numba = None

    def njit(*args, **kw):
        if len(args) == 1 and callable(args[0]) and not kw:
            return args[0]
        return lambda f: f

    USE_NUMBA = False


def backend() -> str:
    return "numba" if USE_NUMBA else "numpy"
