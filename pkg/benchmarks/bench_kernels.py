"""Compare the compiled kernels with the pure-Python fallback.

Run with ``python3 benchmarks/bench_kernels.py``.  Two workloads:

* batch evaluation of a transcendental expression at many points (the inner
  loop of the randomized zero test);
* RK4 integration of a null geodesic on the anti-de Sitter Poincare chart.
"""

import argparse
import time

import numpy as np

from kundt import _backend
from kundt.catalog import get
from kundt.expr import Program, parse
from kundt.geometry import integrate_geodesic


def _time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_eval(npts, repeat):
    e = parse("sin(x)^2*exp(y/3) + cos(x*y) - sqrt(1 + x^2)/(2 + y^2) + log(3 + x*y)^2", ["x", "y"])
    prog = Program([e], ["x", "y"])
    pts = np.random.default_rng(0).uniform(-1, 1, size=(npts, 2))
    return lambda: prog.run(pts), repeat


def bench_geodesic(steps, repeat):
    inst = get("ads_poincare")
    v0 = [1.0, -0.5 * (0.3 ** 2 + 0.2 ** 2), 0.3, 0.2]
    return lambda: integrate_geodesic(inst.metric, [0, 0, 0, 1], v0, 2.0, steps), repeat


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--points", type=int, default=20000)
    ap.add_argument("--steps", type=int, default=4096)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if not _backend.compiled_available():
        print("compiled kernels are not built; only the Python fallback is available")
        return
    cases = {
        f"eval_batch ({args.points} points)": bench_eval(args.points, args.repeat),
        f"rk4_geodesic ({args.steps} steps)": bench_geodesic(args.steps, args.repeat),
    }
    print(f"{'workload':32s} {'compiled':>12s} {'python':>12s} {'speedup':>9s}")
    for name, (fn, rep) in cases.items():
        _backend.use("compiled")
        tc = _time(fn, rep)
        _backend.use("python")
        tp = _time(fn, rep)
        print(f"{name:32s} {tc * 1e3:10.2f}ms {tp * 1e3:10.2f}ms {tp / tc:8.1f}x")
    _backend.use("compiled")


if __name__ == "__main__":
    main()
