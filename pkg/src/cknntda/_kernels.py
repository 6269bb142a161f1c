"""Kernel backend selection.

Imports the compiled extension when present, falling back to the pure-Python
implementations. Set ``CKNNTDA_PURE_PYTHON=1`` to force the fallback (used by
the parity tests and the benchmark).
"""

import os

from . import _kernels_py

if os.environ.get("CKNNTDA_PURE_PYTHON"):
    _impl = _kernels_py
    HAVE_COMPILED = False
else:
    try:
        from . import _speedups as _impl  # type: ignore[attr-defined]

        HAVE_COMPILED = True
    except ImportError:
        _impl = _kernels_py
        HAVE_COMPILED = False

uf_merge_ranks = _impl.uf_merge_ranks
flag_triangles = _impl.flag_triangles
reduce_z2 = _impl.reduce_z2

BACKEND = "compiled" if HAVE_COMPILED else "pure-python"
