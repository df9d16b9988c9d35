"""Select the compiled kernels when available, else the pure-Python ones.

Set ``REGIONXFER_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _purepy

BACKENDS = {"python": _purepy}

try:
    from . import _core
except ImportError:  # extension not built
    _core = None
else:
    BACKENDS["cython"] = _core

if _core is not None and os.environ.get("REGIONXFER_PURE_PYTHON", "") not in ("1", "true", "yes"):
    BACKEND = "cython"
else:
    BACKEND = "python"

_impl = BACKENDS[BACKEND]
nearest_sites = _impl.nearest_sites
nms = _impl.nms
hysteresis = _impl.hysteresis
bfs_refine = _impl.bfs_refine
