"""Fill-kernel backends.

The compiled kernel is used when its extension module imports cleanly;
otherwise the pure-Python twin takes over. Set ``KZIMPUTE_BACKEND=py`` or
``=c`` to force a side. Both implement identical arithmetic and the test
suite asserts their outputs are bit-equal.
"""

from __future__ import annotations

import os

from . import _fill_py

_requested = os.environ.get("KZIMPUTE_BACKEND", "").strip().lower()
if _requested not in ("", "py", "c"):
    raise ImportError(f"KZIMPUTE_BACKEND must be 'py' or 'c', got {_requested!r}")

if _requested == "py":
    _impl = _fill_py
    BACKEND = "py"
else:
    try:
        from . import _fill_cy as _impl

        BACKEND = "c"
    except ImportError:
        if _requested == "c":
            raise
        _impl = _fill_py
        BACKEND = "py"

kz_fill = _impl.kz_fill


def active_backend() -> str:
    """Name of the kernel in use: 'c' (compiled) or 'py' (fallback)."""
    return BACKEND
