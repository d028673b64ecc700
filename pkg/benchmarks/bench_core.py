"""Time the compiled and numpy kernel-sum backends on the same inputs.

    python benchmarks/bench_core.py --N 1000 --points 512 --repeat 5
"""

import argparse
import time

import numpy as np

from panelhet._backend import available_backends
from panelhet.jackknife import TOJ_WEIGHTS
from panelhet.kernels import EPANECHNIKOV, GAUSSIAN


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--N", type=int, default=1000, help="units")
    ap.add_argument("--points", type=int, default=512, help="evaluation points")
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    rng = np.random.default_rng(args.seed)
    xi = rng.normal(size=args.N)
    comps = np.ascontiguousarray(xi + 0.05 * rng.normal(size=(6, args.N)))
    w = TOJ_WEIGHTS
    weights = np.array([w.w_full] + [w.w_half / 2] * 2 + [w.w_third / 3] * 3)
    pts = np.linspace(-4, 4, args.points)
    h = 0.3

    backends = available_backends()
    cases = {
        "kde epanechnikov": lambda c: c.kernel_sum(xi, pts, h, EPANECHNIKOV.code, 0),
        "kde gaussian": lambda c: c.kernel_sum(xi, pts, h, GAUSSIAN.code, 0),
        "kcdf gaussian": lambda c: c.kernel_sum(xi, pts, h, GAUSSIAN.code, 1),
        "rbc moments TOJ": lambda c: c.combined_moments(comps, weights, xi, pts, h, h, 0.1, EPANECHNIKOV.code),
    }
    names = sorted(backends)
    print(f"N={args.N} points={args.points} best of {args.repeat}")
    print(f"{'case':<20}" + "".join(f"{n + ' ms':>14}" for n in names) + ("     speedup" if len(names) > 1 else ""))
    for label, fn in cases.items():
        t = {n: best_of(lambda: fn(backends[n]), args.repeat) for n in names}
        ref = np.asarray(fn(backends["python"]), dtype=float)
        for n in names:
            diff = np.max(np.abs(np.asarray(fn(backends[n]), dtype=float) - ref))
            assert diff < 1e-9 * max(1.0, float(np.max(np.abs(ref)))), (label, n, diff)
        row = f"{label:<20}" + "".join(f"{1e3 * t[n]:>14.2f}" for n in names)
        if "cython" in t:
            row += f"{t['python'] / t['cython']:>11.1f}x"
        print(row)


if __name__ == "__main__":
    main()
