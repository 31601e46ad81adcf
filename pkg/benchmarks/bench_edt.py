"""Benchmark the exact distance-transform backends.

Runs the same seeded workloads in two subprocesses, one per backend
(BALLCOVER_BACKEND=numba and =fallback), and prints a comparison table.
The fallback path uses scipy's exact EDT for plain 0/inf seeds and a
pure-Python envelope scan for weighted seeds, so expect a large gap on
the weighted workload.
"""

from __future__ import annotations

import json
import os
import subprocess
import sys

SIZES = [256, 512, 1024]
WEIGHTED_SIZES = [128, 256]
REPEATS = 3

_WORKER = r"""
import json, sys, time
import numpy as np
from ballcover import _kernels

sizes = json.loads(sys.argv[1])
weighted_sizes = json.loads(sys.argv[2])
repeats = int(sys.argv[3])
rng = np.random.default_rng(7)
out = {"backend": _kernels.BACKEND, "edt": {}, "weighted": {}}

for n in sizes:
    target = rng.random((n, n)) < 0.01
    _kernels.edt_squared_cells(target)  # warm up / JIT compile
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        _kernels.edt_squared_cells(target)
        times.append(time.perf_counter() - t0)
    out["edt"][str(n)] = min(times)

for n in weighted_sizes:
    seed = np.where(rng.random((n, n)) < 0.05,
                    -rng.random((n, n)) * n, 1e30)
    _kernels.envelope2d(seed)
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        _kernels.envelope2d(seed)
        times.append(time.perf_counter() - t0)
    out["weighted"][str(n)] = min(times)

print(json.dumps(out))
"""


def run_backend(backend: str) -> dict:
    env = dict(os.environ, BALLCOVER_BACKEND=backend)
    proc = subprocess.run(
        [sys.executable, "-c", _WORKER, json.dumps(SIZES),
         json.dumps(WEIGHTED_SIZES), str(REPEATS)],
        env=env, capture_output=True, text=True, check=True,
    )
    return json.loads(proc.stdout.strip().splitlines()[-1])


def main() -> None:
    results = {b: run_backend(b) for b in ("numba", "fallback")}
    print(f"{'workload':>18s} {'numba':>12s} {'fallback':>12s} {'speedup':>9s}")
    for kind, sizes in (("edt", SIZES), ("weighted", WEIGHTED_SIZES)):
        for n in sizes:
            a = results["numba"][kind][str(n)]
            b = results["fallback"][kind][str(n)]
            print(f"{kind + ' ' + str(n) + 'x' + str(n):>18s} "
                  f"{a * 1e3:>10.2f}ms {b * 1e3:>10.2f}ms {b / a:>8.1f}x")


if __name__ == "__main__":
    main()
