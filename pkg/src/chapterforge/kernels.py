"""Select the matching-kernel implementation at import time.

The compiled ``_ckernels`` extension is used when it was built; otherwise the
pure-Python ``_pykernels`` module stands in. ``CHAPTERFORGE_PURE_PYTHON=1``
forces the fallback.
"""

from __future__ import annotations

import os

from . import _pykernels

if os.environ.get("CHAPTERFORGE_PURE_PYTHON"):
    _impl = _pykernels
else:
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _pykernels

BACKEND = "cython" if _impl is not _pykernels else "python"

interval_iou = _impl.interval_iou
greedy_match = _impl.greedy_match
match_boundaries = _impl.match_boundaries


def implementations() -> dict:
    """All importable kernel modules keyed by name, for tests and benchmarks."""
    found = {"python": _pykernels}
    try:
        from . import _ckernels

        found["cython"] = _ckernels
    except ImportError:
        pass
    return found
