"""Edge models: the communication graph, with different caching strategies."""
from collections import OrderedDict

import numpy as np

from .. import kernels
from .params import integer, take

# Cell side is the range stretched by this factor so that two nodes within
# range can never land two cells apart through floating-point rounding.
_CELL_SLACK = 1.0 + 1e-9


class SpatialGrid:
    """Uniform planar grid bucketing node ids by (x, y) cell.

    The cell side is at least the communication range, so all neighbors of a
    node lie in its 3x3 cell block. For very sparse layouts the side is grown
    to keep the cell count within a small multiple of the node count.
    """

    def __init__(self, positions, range_):
        pos = np.ascontiguousarray(positions, dtype=np.float64)
        n = pos.shape[0]
        self.pos = pos
        self.r2 = float(range_) * float(range_)
        cell = float(range_) * _CELL_SLACK
        if n:
            lo = pos[:, :2].min(axis=0)
            extent = pos[:, :2].max(axis=0) - lo
        else:
            lo = np.zeros(2)
            extent = np.zeros(2)
        limit = max(64, 4 * n)
        while True:
            ncx = int(extent[0] // cell) + 1
            ncy = int(extent[1] // cell) + 1
            if ncx * ncy <= limit:
                break
            cell *= 2.0
        self.cell = cell
        self.origin = lo
        self.ncx, self.ncy = ncx, ncy
        cx = np.minimum(((pos[:, 0] - lo[0]) / cell).astype(np.int64), ncx - 1)
        cy = np.minimum(((pos[:, 1] - lo[1]) / cell).astype(np.int64), ncy - 1)
        flat = cx * ncy + cy
        # stable sort keeps ids ascending inside each cell
        self.cell_nodes = np.argsort(flat, kind="stable").astype(np.int64)
        self.cell_start = np.zeros(ncx * ncy + 1, dtype=np.int64)
        np.cumsum(np.bincount(flat, minlength=ncx * ncy), out=self.cell_start[1:])
        self.cell_xy = np.ascontiguousarray(np.stack([cx, cy], axis=1))

    def rows(self, sources):
        return kernels.csr_neighbors(self.pos, self.cell_xy, self.ncy, self.cell_start,
                                     self.cell_nodes, self.r2, sources)


def _as_sources(sources):
    return np.ascontiguousarray(sources, dtype=np.int64).reshape(-1)


def _csr_from_rows(rows):
    indptr = np.zeros(len(rows) + 1, dtype=np.int64)
    np.cumsum([len(r) for r in rows], out=indptr[1:])
    indices = np.concatenate(rows).astype(np.int64) if rows else np.empty(0, np.int64)
    return indptr, indices


class EdgeModel:
    """Graph view of a world derived from its communication model.

    ``neighbors(v)`` returns the ids of every ``u != v`` that can communicate
    with ``v`` as an int64 array, in an order shared by all edge models;
    ``neighbors_csr(sources)`` does the same for many nodes at once as a CSR
    pair ``(indptr, indices)``.
    ``adjacency_entries`` counts neighbor ids currently held in memory.
    """

    identifier = ""

    def __init__(self):
        self.world = None
        self.comm = None
        self.adjacency_entries = 0
        self.adjacency_entries_peak = 0

    def bind(self, world, comm):
        self.world = world
        self.comm = comm
        self.invalidate()

    def invalidate(self):
        self._grid = None

    def prepare(self):
        """Build whatever the model keeps between queries."""

    def _note_entries(self, n):
        self.adjacency_entries = n
        if n > self.adjacency_entries_peak:
            self.adjacency_entries_peak = n

    def _spatial(self):
        return self.comm.range is not None

    def _grid_or_build(self):
        if self._grid is None:
            self._grid = SpatialGrid(self.world.positions, self.comm.range)
        return self._grid

    def _compute(self, sources):
        """Fresh neighbor rows for ``sources`` (nothing is retained)."""
        if self._spatial():
            return self._grid_or_build().rows(sources)
        n = self.world.node_count
        can = self.comm.can_communicate
        rows = [np.array([u for u in range(n) if u != s and can(int(s), u)], dtype=np.int64)
                for s in sources]
        return _csr_from_rows(rows)

    def neighbors(self, v):
        v = self.world.check_node(v)
        indptr, indices = self.neighbors_csr(np.array([v], dtype=np.int64))
        return indices

    def neighbors_csr(self, sources):
        raise NotImplementedError


class ListEdgeModel(EdgeModel):
    """Caches every neighborhood; queries are O(1) slices."""

    identifier = "list"

    def invalidate(self):
        super().invalidate()
        self._indptr = None
        self._indices = None
        self._note_entries(0)

    def prepare(self):
        if self._indptr is None:
            n = self.world.node_count
            self._indptr, self._indices = self._compute(np.arange(n, dtype=np.int64))
            self._grid = None
            self._note_entries(int(self._indices.size))

    def neighbors(self, v):
        v = self.world.check_node(v)
        self.prepare()
        return self._indices[self._indptr[v]:self._indptr[v + 1]]

    def neighbors_csr(self, sources):
        self.prepare()
        sources = _as_sources(sources)
        n = self.world.node_count
        if sources.size == n and n and sources[0] == 0 and np.array_equal(
                sources, np.arange(n)):
            return self._indptr, self._indices
        return kernels.gather_rows(self._indptr, self._indices, sources)


class SimpleEdgeModel(EdgeModel):
    """Keeps no neighborhoods; every query rescans the grid around the node."""

    identifier = "simple"

    def prepare(self):
        if self._spatial():
            self._grid_or_build()

    def neighbors_csr(self, sources):
        return self._compute(_as_sources(sources))


class CachedEdgeModel(EdgeModel):
    """Least-recently-used cache holding at most ``k`` neighborhoods."""

    identifier = "cached"

    def __init__(self, k=1024):
        super().__init__()
        self.k = int(k)
        self._cache = OrderedDict()

    def invalidate(self):
        super().invalidate()
        self._cache = OrderedDict()
        self._note_entries(0)

    def prepare(self):
        if self._spatial():
            self._grid_or_build()

    def neighbors_csr(self, sources):
        sources = _as_sources(sources)
        cache = self._cache
        missing = [int(s) for s in dict.fromkeys(sources.tolist()) if s not in cache]
        fresh = {}
        if missing:
            indptr, indices = self._compute(np.array(missing, dtype=np.int64))
            for i, s in enumerate(missing):
                fresh[s] = indices[indptr[i]:indptr[i + 1]].copy()
        rows = []
        entries = self.adjacency_entries
        for s in sources.tolist():
            row = cache.get(s)
            if row is None:
                row = fresh[s] if s in fresh else self._compute(np.array([s]))[1]
                if self.k > 0:
                    cache[s] = row
                    entries += row.size
                    while len(cache) > self.k:
                        _, old = cache.popitem(last=False)
                        entries -= old.size
                    self._note_entries(entries)
            else:
                cache.move_to_end(s)
            rows.append(row)
        return _csr_from_rows(rows)


def make_list(params, streams):
    take(params, {})
    return ListEdgeModel()


def make_simple(params, streams):
    take(params, {})
    return SimpleEdgeModel()


def make_cached(params, streams):
    p = take(params, {"k": (integer(lo=0), 1024)})
    return CachedEdgeModel(p["k"])
