"""numba-compiled twins of the kernels in ``_numpy``."""
import numpy as np
from numba import njit

ACTIVE = 0


@njit(cache=True)
def _scan(pos, cell_xy, ncx, ncy, cell_start, cell_nodes, r2, s, out, k):
    # with an empty ``out`` this only counts
    cx = cell_xy[s, 0]
    cy = cell_xy[s, 1]
    sx = pos[s, 0]
    sy = pos[s, 1]
    sz = pos[s, 2]
    for nx in range(max(cx - 1, 0), min(cx + 2, ncx)):
        for ny in range(max(cy - 1, 0), min(cy + 2, ncy)):
            c = nx * ncy + ny
            for j in range(cell_start[c], cell_start[c + 1]):
                v = cell_nodes[j]
                ddx = sx - pos[v, 0]
                ddy = sy - pos[v, 1]
                ddz = sz - pos[v, 2]
                if ddx * ddx + ddy * ddy + ddz * ddz <= r2 and v != s:
                    if out.size:
                        out[k] = v
                    k += 1
    return k


@njit(cache=True)
def _csr_neighbors(pos, cell_xy, ncy, cell_start, cell_nodes, r2, sources):
    ncx = (cell_start.size - 1) // ncy
    nsrc = sources.size
    indptr = np.zeros(nsrc + 1, dtype=np.int64)
    none = np.empty(0, dtype=np.int64)
    for i in range(nsrc):
        indptr[i + 1] = indptr[i] + _scan(pos, cell_xy, ncx, ncy, cell_start, cell_nodes,
                                          r2, sources[i], none, 0)
    out = np.empty(indptr[nsrc], dtype=np.int64)
    for i in range(nsrc):
        _scan(pos, cell_xy, ncx, ncy, cell_start, cell_nodes, r2, sources[i], out, indptr[i])
    return indptr, out


def csr_neighbors(pos, cell_xy, ncy, cell_start, cell_nodes, r2, sources):
    sources = np.ascontiguousarray(sources, dtype=np.int64)
    return _csr_neighbors(pos, cell_xy, np.int64(ncy), cell_start, cell_nodes,
                          float(r2), sources)


@njit(cache=True)
def _gather_rows(indptr, indices, rows):
    out_ptr = np.zeros(rows.size + 1, dtype=np.int64)
    for i in range(rows.size):
        r = rows[i]
        out_ptr[i + 1] = out_ptr[i] + indptr[r + 1] - indptr[r]
    out = np.empty(out_ptr[-1], dtype=indices.dtype)
    for i in range(rows.size):
        r = rows[i]
        a = indptr[r]
        n = indptr[r + 1] - a
        b = out_ptr[i]
        for j in range(n):
            out[b + j] = indices[a + j]
    return out_ptr, out


def gather_rows(indptr, indices, rows):
    return _gather_rows(indptr, indices, np.ascontiguousarray(rows, dtype=np.int64))


@njit(cache=True)
def _timesync_receive(indptr, indices, stamps, now, state, offset, estimate,
                      received, skew_sum):
    done = 0
    for m in range(indptr.size - 1):
        s = stamps[m]
        for j in range(indptr[m], indptr[m + 1]):
            r = indices[j]
            if state[r] != ACTIVE:
                continue
            converted = s - estimate[r]
            received[r] += 1
            skew_sum[r] += (now + offset[r]) - converted
            done += 1
    return done


def timesync_receive(indptr, indices, stamps, now, state, offset, estimate,
                     received, skew_sum):
    return int(_timesync_receive(indptr, indices, stamps, float(now), state,
                                 offset, estimate, received, skew_sum))
