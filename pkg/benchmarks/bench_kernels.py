"""Benchmark the compiled RK kernels against the pure-Python twin.

Runs the same workloads through both backends and reports timings, rhs
evaluation rates and result agreement:

    python benchmarks/bench_kernels.py [--tau 20] [--cells 64]
"""

import argparse
import math
import time

import numpy as np

from morseosc.kernels import rk_py

try:
    from morseosc.kernels import _rk
except ImportError:
    _rk = None

PARAMS = (10.0, 1.0, 8.0, 1.0, 1.0)  # D, alpha, m, epsilon, omega
CEILING = 8.0 * math.log(10.0)


def bench_propagate(impl, n):
    t0 = time.perf_counter()
    nevals = 0
    q = p = 0.0
    for k in range(n):
        q, p, _t, _st, _ns, ne = impl.propagate(
            *PARAMS, 0.3, 2.0 + 1e-3 * k, 0.0, 2.0 * math.pi,
            False, 0.0, 1e-9, 1e-12, 10**6, CEILING)
        nevals += ne
    dt = time.perf_counter() - t0
    return dt, nevals, (q, p)


def bench_ld_cells(impl, cells, tau):
    ps = np.linspace(-10.0, 10.0, cells)
    vals = np.empty(cells)
    flags = np.zeros(cells, dtype=np.uint8)
    t0 = time.perf_counter()
    nevals = impl.ld_row(*PARAMS, 1.5, ps, 0.0, tau,
                         False, 0.0, 1e-9, 1e-12, 10**7, CEILING, vals, flags)
    dt = time.perf_counter() - t0
    return dt, nevals, vals


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--tau", type=float, default=20.0)
    ap.add_argument("--cells", type=int, default=64)
    ap.add_argument("--orbits", type=int, default=200)
    args = ap.parse_args()

    backends = [("python", rk_py)]
    if _rk is not None:
        backends.insert(0, ("compiled", _rk))
    else:
        print("compiled backend not built; benchmarking pure Python only")

    results = {}
    print(f"\npropagate: {args.orbits} forced orbits over one period")
    for name, impl in backends:
        dt, nevals, state = bench_propagate(impl, args.orbits)
        results[("prop", name)] = state
        print(f"  {name:9s} {dt:8.3f} s   {nevals / dt / 1e6:7.2f} M rhs-evals/s")

    print(f"\nld_row: {args.cells} descriptor cells, tau = {args.tau}")
    for name, impl in backends:
        dt, nevals, vals = bench_ld_cells(impl, args.cells, args.tau)
        results[("ld", name)] = vals
        print(f"  {name:9s} {dt:8.3f} s   {nevals / dt / 1e6:7.2f} M rhs-evals/s   "
              f"{args.cells / dt:8.1f} cells/s")

    if _rk is not None:
        sp = results[("prop", "compiled")]
        spp = results[("prop", "python")]
        dv = max(abs(sp[0] - spp[0]), abs(sp[1] - spp[1]))
        dl = float(np.max(np.abs(results[("ld", "compiled")] - results[("ld", "python")])))
        print(f"\nagreement: propagate max|diff| = {dv:.3e}, ld max|diff| = {dl:.3e}")


if __name__ == "__main__":
    main()
