"""Backend selection for the hom-enumeration kernel.

The compiled extension is used when it was built; otherwise the pure-Python
module is loaded.  Setting ``RGT_PURE_PYTHON=1`` forces the fallback.
"""

from __future__ import annotations

import os

from . import _pykernel

if os.environ.get("RGT_PURE_PYTHON", "") not in ("", "0"):
    _impl = _pykernel
else:
    try:
        from . import _ckernel as _impl  # type: ignore[attr-defined,no-redef]
    except ImportError:
        _impl = _pykernel

BACKEND: str = _impl.BACKEND


def vertex_maps(na, nb, constraints, counts):
    return _impl.vertex_maps(na, nb, constraints, counts)


def count_homs(na, nb, constraints, counts):
    if _impl is not _pykernel:
        try:
            return _impl.count_homs(na, nb, constraints, counts)
        except OverflowError:
            pass
    return _pykernel.count_homs(na, nb, constraints, counts)
