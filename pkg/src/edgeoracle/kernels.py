"""Backend selection for the oracle kernels.

The compiled extension is used when it imports cleanly; otherwise (or when
``EDGEORACLE_PURE_PYTHON`` is set to a non-empty value) the numpy fallback
is used.  Both backends are importable directly for comparison.
"""

from __future__ import annotations

import os

from . import _pykernels

_impl = _pykernels
BACKEND = "python"

if not os.environ.get("EDGEORACLE_PURE_PYTHON"):
    try:
        from . import _ckernels
    except ImportError:  # extension not built
        pass
    else:
        _impl = _ckernels
        BACKEND = "cython"

cross_empty = _impl.cross_empty
within_empty = _impl.within_empty
count_between = _impl.count_between
count_within = _impl.count_within


def backends() -> dict:
    """Map of every importable backend name to its module."""
    found = {"python": _pykernels}
    try:
        from . import _ckernels
    except ImportError:
        pass
    else:
        found["cython"] = _ckernels
    return found
