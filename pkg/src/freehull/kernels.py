"""Kernel dispatch: compiled extension when available, numpy otherwise.

Set ``FREEHULL_PURE_PYTHON=1`` before import to force the numpy fallback
(used by the parity tests and the kernel benchmark).
"""

from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("FREEHULL_PURE_PYTHON"):
    _impl = _kernels_py
    COMPILED = False
else:
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]
        COMPILED = True
    except ImportError:
        _impl = _kernels_py
        COMPILED = False

radial_flip = _impl.radial_flip
min_slack = _impl.min_slack
points_in_star = _impl.points_in_star
push_facets = _impl.push_facets
