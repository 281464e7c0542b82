"""Selects the compiled smoothing kernel when available.

Set ``LATTICE_SKEIN_PURE=1`` to force the pure-Python implementation.
"""

from __future__ import annotations

import os

from . import _pykernel

BACKEND = "python"
_impl = _pykernel

if os.environ.get("LATTICE_SKEIN_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernel as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        pass

# the compiled kernel packs a state into 64 bits
_C_LIMIT = 62


def backend_for(m: int, n: int):
    if _impl is not _pykernel and m * n <= _C_LIMIT and 2 * (m + n) <= 254:
        return _impl
    return _pykernel


def smooth(m: int, n: int, code: int, flip: bool = False):
    return backend_for(m, n).smooth(m, n, code, flip)


def accumulate_full(m: int, n: int, start: int, stop: int, flip: bool = False):
    return backend_for(m, n).accumulate_full(m, n, start, stop, flip)


def accumulate_restricted(m: int, n: int, start: int, stop: int, flip: bool = False):
    return backend_for(m, n).accumulate_restricted(m, n, start, stop, flip)


def scan_restricted(m: int, n: int, target: bytes, start: int, stop: int, flip: bool = False):
    return backend_for(m, n).scan_restricted(m, n, target, start, stop, flip)
