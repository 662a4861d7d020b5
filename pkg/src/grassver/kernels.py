"""Kernel backend selection.

The compiled extension (``grassver._kernels_c``) is preferred when present;
set ``GRASSVER_PURE=1`` to force the pure-Python kernels.  Both backends
expose the same four functions and are interchangeable; the benchmark in
``benchmarks/bench_kernels.py`` compares them.
"""

from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("GRASSVER_PURE"):
    _impl = _kernels_py
else:
    try:
        from . import _kernels_c as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _kernels_py

BACKEND = _impl.BACKEND
rref2 = _impl.rref2
rank2 = _impl.rank2
rrefp = _impl.rrefp
rankp = _impl.rankp

#: both backends, for parity tests and benchmarks
BACKENDS = {"python": _kernels_py}
try:
    from . import _kernels_c

    BACKENDS["cython"] = _kernels_c
except ImportError:
    pass
