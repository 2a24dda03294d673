"""Numba/pure-python backend selection for the hot integer kernels.

The env var POINTEDCAT_BACKEND picks the implementation:

  * "numba"  - jit-compiled int64 kernels (default when numba imports),
  * "python" - pure-python big-integer twins, always exact, slower.

The numba path guards against int64 overflow and raises so callers can fall
back to the big-integer twin; results of both paths are identical.
"""

from __future__ import annotations

import os

_env = os.environ.get("POINTEDCAT_BACKEND", "").strip().lower()

if _env not in ("", "numba", "python"):
    raise RuntimeError(f"POINTEDCAT_BACKEND must be 'numba' or 'python', got {_env!r}")

HAVE_NUMBA = False
if _env != "python":
    try:
        from numba import njit  # noqa: F401

        HAVE_NUMBA = True
    except ImportError:
        if _env == "numba":
            raise
        HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and _env != "python"


def jit_or_python(fn):
    """Apply @njit(cache=True) when the numba backend is active."""
    if USE_NUMBA:
        from numba import njit

        return njit(cache=True)(fn)
    return fn


def backend_name() -> str:
    return "numba" if USE_NUMBA else "python"
