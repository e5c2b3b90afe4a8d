"""Pure-numpy implementations of the hot kernels.

Every function here has a twin in ``_numba`` with identical inputs, outputs and
floating-point evaluation order, so the two backends agree bit for bit.
"""
import numpy as np

ACTIVE = 0

# Upper bound on candidate pairs materialised at once by csr_neighbors.
_PAIR_BUDGET = 1 << 22


def _empty_csr(nrows):
    return np.zeros(nrows + 1, dtype=np.int64), np.empty(0, dtype=np.int64)


def csr_neighbors(pos, cell_xy, ncy, cell_start, cell_nodes, r2, sources):
    """Neighbor rows of ``sources`` by scanning the 3x3 cell block of each source.

    ``cell_nodes`` lists node ids grouped by flat cell index ``cx * ncy + cy``
    (ascending id inside a cell); ``cell_start`` is its offset table. A row
    never contains its source and lists neighbors in scan order: cells by
    ascending (x, y) index, then ``cell_nodes`` order.
    """
    sources = np.asarray(sources, dtype=np.int64)
    nsrc = sources.size
    if nsrc == 0:
        return _empty_csr(0)
    ncx = (cell_start.size - 1) // ncy
    px = pos[:, 0]
    py = pos[:, 1]
    pz = pos[:, 2]
    rows_out = []
    cols_out = []

    # rough per-source candidate count, used only to size the chunks
    mean_cell = max(1.0, cell_nodes.size / max(1, cell_start.size - 1))
    chunk = max(1, int(_PAIR_BUDGET // (9 * mean_cell)))
    for lo in range(0, nsrc, chunk):
        src = sources[lo:lo + chunk]
        cx = cell_xy[src, 0]
        cy = cell_xy[src, 1]
        local = np.arange(src.size, dtype=np.int64)
        for dx in (-1, 0, 1):
            nx = cx + dx
            for dy in (-1, 0, 1):
                ny = cy + dy
                valid = (nx >= 0) & (nx < ncx) & (ny >= 0) & (ny < ncy)
                cell = np.where(valid, nx * ncy + ny, 0)
                start = cell_start[cell]
                cnt = np.where(valid, cell_start[cell + 1] - start, 0)
                total = int(cnt.sum())
                if total == 0:
                    continue
                row = np.repeat(local, cnt)
                first = np.cumsum(cnt) - cnt
                offs = np.arange(total, dtype=np.int64) - np.repeat(first, cnt)
                cand = cell_nodes[np.repeat(start, cnt) + offs]
                s = src[row]
                ddx = px[s] - px[cand]
                ddy = py[s] - py[cand]
                ddz = pz[s] - pz[cand]
                d2 = ddx * ddx + ddy * ddy + ddz * ddz
                keep = (d2 <= r2) & (cand != s)
                rows_out.append(row[keep] + lo)
                cols_out.append(cand[keep])
    if not rows_out:
        return _empty_csr(nsrc)
    rows = np.concatenate(rows_out)
    cols = np.concatenate(cols_out)
    # chunks were appended in (offset, cell position) order; a stable sort by
    # row keeps that scan order inside each row
    order = np.argsort(rows, kind="stable")
    rows = rows[order]
    cols = cols[order]
    counts = np.bincount(rows, minlength=nsrc)
    indptr = np.zeros(nsrc + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])
    return indptr, cols.astype(np.int64, copy=False)


def gather_rows(indptr, indices, rows):
    """Sub-CSR made of ``rows`` (in the given order) of a CSR matrix."""
    rows = np.asarray(rows, dtype=np.int64)
    start = indptr[rows]
    cnt = indptr[rows + 1] - start
    out_ptr = np.zeros(rows.size + 1, dtype=np.int64)
    np.cumsum(cnt, out=out_ptr[1:])
    total = int(out_ptr[-1])
    offs = np.arange(total, dtype=np.int64) - np.repeat(out_ptr[:-1], cnt)
    return out_ptr, indices[np.repeat(start, cnt) + offs]


def timesync_receive(indptr, indices, stamps, now, state, offset, estimate,
                     received, skew_sum):
    """Convert every received stamp to the receiver's clock and book the skew.

    Only receivers whose state is ACTIVE process the message. Returns the
    number of (message, receiver) pairs that were processed.
    """
    if indices.size == 0:
        return 0
    cnt = np.diff(indptr)
    stamp = np.repeat(stamps, cnt)
    live = state[indices] == ACTIVE
    r = indices[live]
    converted = stamp[live] - estimate[r]
    skew = (now + offset[r]) - converted
    np.add.at(received, r, 1)
    # np.add.at applies updates sequentially in index order, matching the loop
    np.add.at(skew_sum, r, skew)
    return int(r.size)
