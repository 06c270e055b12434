"""Optional numba compilation of the search kernels.

Set ``AUTOTOPISM_NO_JIT=1`` to run the same kernels as plain Python.
"""

from __future__ import annotations

import os

JIT_DISABLED = os.environ.get("AUTOTOPISM_NO_JIT", "").strip().lower() not in ("", "0", "false", "no")

if not JIT_DISABLED:
    try:
        from numba import njit as _njit
    except ImportError:  # pragma: no cover - numba is a declared dependency
        _njit = None
else:
    _njit = None

JIT_ACTIVE = _njit is not None


def maybe_njit(*args, **kwargs):
    """``numba.njit`` when enabled, otherwise the identity decorator."""
    if args and callable(args[0]) and len(args) == 1 and not kwargs:
        fn = args[0]
        return _njit(cache=True)(fn) if JIT_ACTIVE else fn

    def wrap(fn):
        if not JIT_ACTIVE:
            return fn
        kwargs.setdefault("cache", True)
        return _njit(*args, **kwargs)(fn)

    return wrap
