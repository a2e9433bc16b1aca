"""Single-source graph kernels with a compiled fast path.

``bfs_levels`` and ``dijkstra`` operate on CSR adjacency arrays.  The
compiled Cython implementation is preferred; the pure-Python module is a
drop-in replacement used when the extension was not built or when
``COARSEKIT_PURE=1`` is set in the environment.  Both produce identical
outputs (the Dijkstra heap orders ties by vertex index, so distance arrays
and any path reconstruction derived from them are reproducible).
"""

import os

from . import _pure

if os.environ.get("COARSEKIT_PURE") == "1":
    _impl = _pure
    BACKEND = "pure"
else:
    try:
        from . import _ckern as _impl

        BACKEND = "compiled"
    except ImportError:
        _impl = _pure
        BACKEND = "pure"

bfs_levels = _impl.bfs_levels
dijkstra = _impl.dijkstra

__all__ = ["bfs_levels", "dijkstra", "BACKEND"]
