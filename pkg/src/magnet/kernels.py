"""Kernel backend selection.

Prefers the compiled extension (magnet._speedups) and falls back to the
numpy implementations (magnet._kernels_py).  Set MAGNET_PURE_PYTHON=1 to
force the fallback.  For configs in the exact-product regime (l <= 32)
the two backends emit bit-identical graphs; in the log-space regime they
agree up to ulp-level rounding of exp/log1p.
"""

from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("MAGNET_PURE_PYTHON"):
    _impl = _kernels_py
else:
    try:
        from . import _speedups as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _kernels_py

BACKEND = _impl.BACKEND
HAVE_COMPILED = BACKEND == "compiled"

naive_edges_table = _impl.naive_edges_table
naive_edges_general = _impl.naive_edges_general
bucketed_emit = _impl.bucketed_emit
union_find_labels = _impl.union_find_labels
bfs_distance_histogram = _impl.bfs_distance_histogram
