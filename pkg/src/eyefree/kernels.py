"""Kernel backend selection.

The compiled module is used when it imports; set ``EYEFREE_PURE_PYTHON=1`` to
force the reference implementation. Both expose the same five functions.
"""

from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("EYEFREE_PURE_PYTHON", "") not in ("", "0"):
    _impl = _kernels_py
else:
    try:
        from . import _ckernels as _impl  # type: ignore[attr-defined]
    except ImportError:  # pragma: no cover - depends on the build
        _impl = _kernels_py

BACKEND: str = _impl.BACKEND
find_embedding = _impl.find_embedding
copy_subsets = _impl.copy_subsets
canonical_code = _impl.canonical_code
kex_bnb = _impl.kex_bnb
partition_bnb = _impl.partition_bnb


def scan_ifree(adj_rows, n, pred_red, pred_blue):
    """Flags for a batch of plain graphs given as an (m, n) uint64 array."""
    if _impl is _kernels_py:
        rows = [[int(x) for x in row] for row in adj_rows]
        return _kernels_py.scan_ifree(rows, n, pred_red, pred_blue)
    return _impl.scan_ifree(adj_rows, n, pred_red, pred_blue)


def backends():
    """Both kernel modules that are importable, keyed by name."""
    out = {"python": _kernels_py}
    try:
        from . import _ckernels  # type: ignore[attr-defined]

        out["cython"] = _ckernels
    except ImportError:  # pragma: no cover
        pass
    return out
