"""Hot kernels, backed by numba when available.

Set ``SWARMSIM_NO_NUMBA=1`` to force the pure-numpy path. Both backends are
importable directly as ``swarmsim.kernels._numpy`` and ``swarmsim.kernels._numba``.
"""
import logging
import os

from . import _numpy

log = logging.getLogger(__name__)

BACKEND = "numpy"
_impl = _numpy

if os.environ.get("SWARMSIM_NO_NUMBA", "").strip().lower() not in ("1", "true", "yes"):
    try:
        from . import _numba as _impl
        BACKEND = "numba"
    except ImportError:  # pragma: no cover - numba is a declared dependency
        log.warning("numba unavailable, using numpy kernels")

csr_neighbors = _impl.csr_neighbors
gather_rows = _impl.gather_rows
timesync_receive = _impl.timesync_receive

__all__ = ["BACKEND", "csr_neighbors", "gather_rows", "timesync_receive"]
