"""Scoring kernel dispatch.

Set TOSS_BACKEND=numpy to select the pure-numpy kernels; the default is the
numba backend, falling back to numpy automatically when numba is missing.
Both backends implement the same functions with identical semantics.
"""

from __future__ import annotations

import os

_requested = os.environ.get("TOSS_BACKEND", "numba").strip().lower()
if _requested not in ("numba", "numpy"):
    raise ValueError(f"TOSS_BACKEND must be 'numba' or 'numpy', got {_requested!r}")

if _requested == "numba":
    try:
        from .numba_backend import accumulate_presence, accumulate_weighted, bm25_accumulate

        _active = "numba"
    except ImportError:
        from .numpy_backend import accumulate_presence, accumulate_weighted, bm25_accumulate

        _active = "numpy"
else:
    from .numpy_backend import accumulate_presence, accumulate_weighted, bm25_accumulate

    _active = "numpy"


def active_backend() -> str:
    return _active


__all__ = [
    "accumulate_presence",
    "accumulate_weighted",
    "bm25_accumulate",
    "active_backend",
]
