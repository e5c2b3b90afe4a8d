import os
import subprocess
import sys

import numpy as np
import pytest

from swarmsim.kernels import _numba, _numpy
from swarmsim.models.edge import SpatialGrid


def _grid(seed, n, side, range_=1.0):
    rng = np.random.default_rng(seed)
    pos = np.zeros((n, 3))
    pos[:, :2] = rng.random((n, 2)) * side
    return SpatialGrid(pos, range_), rng


def _call(mod, g, sources):
    return mod.csr_neighbors(g.pos, g.cell_xy, g.ncy, g.cell_start, g.cell_nodes, g.r2, sources)


@pytest.mark.parametrize("seed, n, side", [(0, 1, 1.0), (1, 50, 2.0), (2, 2000, 10.0),
                                           (3, 500, 60.0), (4, 3000, 3.0)])
def test_csr_neighbors_backends_identical(seed, n, side):
    g, rng = _grid(seed, n, side)
    for sources in (np.arange(n), rng.integers(0, n, 77), np.empty(0, np.int64)):
        sources = np.ascontiguousarray(sources, dtype=np.int64)
        a = _call(_numpy, g, sources)
        b = _call(_numba, g, sources)
        assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])
        assert a[0].dtype == b[0].dtype == np.int64


def test_gather_rows_backends_identical():
    g, rng = _grid(7, 800, 6)
    indptr, indices = _call(_numpy, g, np.arange(800))
    rows = rng.integers(0, 800, 300).astype(np.int64)
    a = _numpy.gather_rows(indptr, indices, rows)
    b = _numba.gather_rows(indptr, indices, rows)
    assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])
    for i, r in enumerate(rows):
        assert np.array_equal(a[1][a[0][i]:a[0][i + 1]], indices[indptr[r]:indptr[r + 1]])


def test_timesync_receive_backends_identical():
    g, rng = _grid(9, 1500, 8)
    n = 1500
    senders = np.sort(rng.choice(n, 600, replace=False)).astype(np.int64)
    indptr, indices = _call(_numpy, g, senders)
    stamps = rng.normal(size=senders.size) + 5
    state = rng.integers(0, 3, n).astype(np.int8)
    offset = rng.normal(size=n)
    estimate = rng.normal(size=n) * 0.1
    out = []
    for mod in (_numpy, _numba):
        received = np.zeros(n, np.int64)
        skew = np.zeros(n)
        count = mod.timesync_receive(indptr, indices, stamps, 6.0, state, offset, estimate,
                                     received, skew)
        out.append((count, received, skew))
    assert out[0][0] == out[1][0]
    assert np.array_equal(out[0][1], out[1][1])
    assert np.array_equal(out[0][2], out[1][2])  # bit-identical, not just close
    # only active receivers count
    assert out[0][0] == int(np.sum(state[indices] == 0))


def test_env_flag_selects_numpy():
    code = "import swarmsim.kernels as k; print(k.BACKEND)"
    env = dict(os.environ, SWARMSIM_NO_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True,
                         check=True)
    assert out.stdout.strip() == "numpy"
    env.pop("SWARMSIM_NO_NUMBA")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True,
                         check=True)
    assert out.stdout.strip() == "numba"


def test_backend_benchmark_runs():
    script = os.path.join(os.path.dirname(__file__), "..", "benchmarks", "bench_backends.py")
    out = subprocess.run([sys.executable, script, "--nodes", "200", "--side", "3",
                          "--repeat", "1", "--messages", "3"],
                         capture_output=True, text=True, check=True)
    assert "csr_neighbors_ms" in out.stdout and "numpy" in out.stdout
