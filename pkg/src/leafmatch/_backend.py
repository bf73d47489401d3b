"""Kernel backend selection.

Hot loops live in :mod:`leafmatch.kernels` in two flavours: a numba ``@njit``
version and a pure-numpy fallback. The active flavour is read from the
``LEAFMATCH_BACKEND`` environment variable (``numba`` or ``numpy``) at import
time and can be switched at runtime with :func:`set_backend`.
"""

import os

try:
    import numba

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - numba is a hard dependency in practice
    numba = None
    HAS_NUMBA = False

_VALID = ("numba", "numpy")


def _initial_backend():
    requested = os.environ.get("LEAFMATCH_BACKEND", "numba").strip().lower()
    if requested not in _VALID:
        raise ValueError(f"LEAFMATCH_BACKEND must be one of {_VALID}, got {requested!r}")
    if requested == "numba" and not HAS_NUMBA:
        return "numpy"
    return requested


_backend = _initial_backend()


def get_backend():
    return _backend


def set_backend(name):
    """Switch the kernel backend; returns the previous one."""
    global _backend
    if name not in _VALID:
        raise ValueError(f"backend must be one of {_VALID}, got {name!r}")
    if name == "numba" and not HAS_NUMBA:
        raise RuntimeError("numba is not importable")
    previous, _backend = _backend, name
    return previous


def njit(fn):
    """``numba.njit`` with the options every kernel uses; identity without numba."""
    if not HAS_NUMBA:
        return fn
    return numba.njit(cache=True, nogil=True)(fn)
