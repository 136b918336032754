"""Benchmark the compiled kernel against the pure NumPy fallback on the
Monte Carlo hot loop (batched piecewise-constant propagation).

Usage: python benchmarks/bench_backends.py [--cells N] [--samples N]
       [--intervals N] [--repeat N]
"""

import argparse
import time

import numpy as np

from qlandscape import _fallback
from qlandscape.scan import ScanConfig, cell_amplitudes

try:
    from qlandscape import _speedups
except ImportError:
    _speedups = None


def bench(kernel, cfg, cells, repeat):
    args_common = (1.0, 0.0, 0.0, 1.0, 0.0, 1.0, 0.0, 0.0, 0.5,
                   cfg.T / cfg.intervals)
    blocks = [np.ascontiguousarray(cell_amplitudes(cfg, c)) for c in range(cells)]
    best = np.inf
    checksum = 0.0
    for _ in range(repeat):
        start = time.perf_counter()
        for block in blocks:
            j = kernel.objectives_uniform(*args_common, block)
            checksum += float(j.sum())
        best = min(best, time.perf_counter() - start)
    return best, checksum


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--cells", type=int, default=50)
    ap.add_argument("--samples", type=int, default=300)
    ap.add_argument("--intervals", type=int, default=100)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    cfg = ScanConfig(T=np.pi / 12, grid_phi=2, grid_psi=2,
                     samples=args.samples, intervals=args.intervals, seed=0)
    work = args.cells * args.samples * args.intervals

    t_pure, sum_pure = bench(_fallback, cfg, args.cells, args.repeat)
    print(f"pure     : {t_pure:8.3f} s   "
          f"{work / t_pure / 1e6:7.1f} M interval-steps/s")
    if _speedups is None:
        print("compiled : not built (pip install -e . --no-build-isolation)")
        return
    t_fast, sum_fast = bench(_speedups, cfg, args.cells, args.repeat)
    print(f"compiled : {t_fast:8.3f} s   "
          f"{work / t_fast / 1e6:7.1f} M interval-steps/s")
    print(f"speedup  : {t_pure / t_fast:.1f}x   "
          f"(checksum agreement {abs(sum_pure - sum_fast):.2e})")


if __name__ == "__main__":
    main()
