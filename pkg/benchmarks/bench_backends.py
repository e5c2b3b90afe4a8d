"""Compare the numba and pure-numpy kernel backends.

Each backend runs in its own interpreter because the backend is chosen once,
at import time, from SWARMSIM_NO_NUMBA.

    python3 benchmarks/bench_backends.py --nodes 5000 --repeat 5
"""
import argparse
import json
import os
import subprocess
import sys

CHILD = r"""
import io, json, sys, time
import numpy as np
from swarmsim import kernels
from swarmsim.controller import SimulationController
from swarmsim.models.edge import SpatialGrid
from swarmsim.scenario import ScenarioSpec, generate_rect_world

n, side, repeat, messages = int(sys.argv[1]), float(sys.argv[2]), int(sys.argv[3]), int(sys.argv[4])
pos = generate_rect_world(ScenarioSpec(n, side, side, seed=1))
grid = SpatialGrid(pos, 1.0)
src = np.arange(n, dtype=np.int64)

def best(fn):
    fn()  # warm-up, includes jit compilation or cache load
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times) * 1000.0

indptr, indices = grid.rows(src)
rows = np.random.default_rng(0).integers(0, n, n).astype(np.int64)
stamps = np.zeros(n)
state = np.zeros(n, dtype=np.int8)
zeros = np.zeros(n)
res = {"backend": kernels.BACKEND, "entries": int(indices.size)}
res["csr_neighbors_ms"] = best(lambda: grid.rows(src))
res["gather_rows_ms"] = best(lambda: kernels.gather_rows(indptr, indices, rows))
res["timesync_receive_ms"] = best(lambda: kernels.timesync_receive(
    indptr, indices, stamps, 1.0, state, zeros, zeros, np.zeros(n, np.int64), np.zeros(n)))

def case():
    ctl = SimulationController(seed=1, stdout=io.StringIO())
    ctl.run_task("timesync_case", {"count": n, "width": side, "height": side,
                                   "total_messages": messages})
res["timesync_case_ms"] = best(case)
print(json.dumps(res))
"""


def run_backend(no_numba, args):
    env = dict(os.environ, SWARMSIM_NO_NUMBA="1" if no_numba else "0")
    out = subprocess.run(
        [sys.executable, "-c", CHILD, str(args.nodes), str(args.side), str(args.repeat),
         str(args.messages)], env=env, capture_output=True, text=True, check=True)
    return json.loads(out.stdout.strip().splitlines()[-1])


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--nodes", type=int, default=5000)
    ap.add_argument("--side", type=float, default=10.0)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--messages", type=int, default=40,
                    help="total_messages for the end-to-end case")
    args = ap.parse_args(argv)

    results = [run_backend(False, args), run_backend(True, args)]
    a, b = results
    print(f"{args.nodes} nodes, {args.side}x{args.side}, {a['entries']} adjacency entries, "
          f"best of {args.repeat}")
    print(f"{'kernel':<22}{a['backend']:>12}{b['backend']:>12}{'speedup':>10}")
    for key in ("csr_neighbors_ms", "gather_rows_ms", "timesync_receive_ms", "timesync_case_ms"):
        ratio = b[key] / a[key] if a[key] else float("nan")
        print(f"{key:<22}{a[key]:>12.2f}{b[key]:>12.2f}{ratio:>9.1f}x")


if __name__ == "__main__":
    main()
