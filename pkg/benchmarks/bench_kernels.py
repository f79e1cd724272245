"""Timing comparison of the compiled and numpy kernel backends.

Runs the O(n^2) fractional-derivative sweeps and the pairwise Hölder
suprema on matched inputs and prints per-call times and speedups.

    python benchmarks/bench_kernels.py [--n 1024] [--modes 8] [--repeat 3]
"""

import argparse
import time

import numpy as np
from scipy.special import gamma

from roughdyn.kernels import _pykernels

try:
    from roughdyn.kernels import _fastkernels
except ImportError:
    _fastkernels = None


def _time(fn, *args, repeat=3):
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=1024)
    ap.add_argument("--modes", type=int, default=8)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    n, m = args.n, args.modes
    dt = 1.0 / n
    alpha = 0.5
    g = np.cumsum(rng.standard_normal((n + 1, m)), axis=0) * dt**0.75
    grec_l = 1.0 / gamma(1.0 - alpha)
    grec_r = 1.0 / gamma(alpha)

    cases = [
        ("frac_deriv_left_mid", (g, dt, alpha, grec_l)),
        ("frac_deriv_right_mid", (g, dt, alpha, grec_r)),
        ("holder_pair_sup", (g, dt, 0.55, np.inf)),
        ("weighted_holder_sup", (g, dt, 0.55, 4.0)),
    ]
    print(f"n={n} modes={m} alpha={alpha}")
    for name, cargs in cases:
        py_fn = getattr(_pykernels, name)
        t_py = _time(py_fn, *cargs, repeat=args.repeat)
        line = f"{name:24s} numpy {t_py * 1e3:9.2f} ms"
        if _fastkernels is not None:
            cy_fn = getattr(_fastkernels, name)
            t_cy = _time(cy_fn, *cargs, repeat=args.repeat)
            ref, new = np.asarray(py_fn(*cargs)), np.asarray(cy_fn(*cargs))
            agree = np.max(np.abs(ref - new)) < 1e-9 * (1 + np.max(np.abs(ref)))
            line += f"   cython {t_cy * 1e3:9.2f} ms   x{t_py / t_cy:6.1f}"
            line += "" if agree else "   !! MISMATCH"
        else:
            line += "   (compiled backend unavailable)"
        print(line)


if __name__ == "__main__":
    main()
