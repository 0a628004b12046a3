"""Compiled vs pure-Python kernels.

    python3 benchmarks/bench_kernels.py [--repeat 3]

Times the double-precision recurrence fill and the Monte Carlo path
integrator with both implementations and checks they agree.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from slecoef import kernels
from slecoef.stencil import EtaSequence


def best_of(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--nmax", type=int, default=400, help="fill size")
    ap.add_argument("--paths", type=int, default=256)
    ap.add_argument("--steps", type=int, default=2000)
    args = ap.parse_args()

    if kernels.compiled_impl is None:
        raise SystemExit("compiled extension not built; run pip install -e . --no-build-isolation")
    impls = {"compiled": kernels.compiled_impl, "python": kernels.python_impl}

    eta = [float(x) for x in EtaSequence.brownian(1).table(args.nmax)]
    q = 21 / 8
    fills = {name: impl.fill_eta_double(eta, q, False, args.nmax)[1] for name, impl in impls.items()}
    same = np.array_equal(fills["compiled"], fills["python"])

    rng = np.random.default_rng(0)
    incs = rng.standard_normal((args.paths, args.steps)) * np.sqrt(6 * 1e-3)
    paths = {name: impl.integrate_paths(incs, 5, 1e-3, 1e12)[0] for name, impl in impls.items()}
    drift = float(np.abs(np.asarray(paths["compiled"]) - np.asarray(paths["python"])).max())

    print(f"{'kernel':<22}{'compiled':>12}{'python':>12}{'speedup':>10}")
    rows = [
        (f"fill nmax={args.nmax}",
         lambda impl: impl.fill_eta_double(eta, q, False, args.nmax)),
        (f"paths {args.paths}x{args.steps}",
         lambda impl: impl.integrate_paths(incs, 5, 1e-3, 1e12)),
    ]
    for label, job in rows:
        tc = best_of(lambda: job(impls["compiled"]), args.repeat)
        tp = best_of(lambda: job(impls["python"]), args.repeat)
        print(f"{label:<22}{tc:>11.3f}s{tp:>11.3f}s{tp / tc:>9.1f}x")
    step_ns = best_of(lambda: impls["compiled"].integrate_paths(incs, 5, 1e-3, 1e12), 1)
    step_ns *= 1e9 / (args.paths * args.steps)
    print(f"compiled path step: {step_ns:.0f} ns")
    print(f"fill outputs bit-identical: {same}; max path difference: {drift:.1e}")


if __name__ == "__main__":
    main()
