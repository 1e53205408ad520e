"""Benchmark the compiled kernel backend against the NumPy fallback.

Run as `python -m revpair2d.bench`.  Times the hot paths (Bessel block
evaluation and the damped rate integrand) and one end-to-end survival
sweep on each available backend, printing a small table.  Used to keep
an eye on the compiled extension actually paying for itself.
"""

import math
import time

import numpy as np

from ._backend import get_backend
from .kernel import PairParams
from .quadrature import SWEEP_CONFIG, integrate_damped


def _time(fn, min_seconds=0.2):
    fn()  #warm up
    n = 1
    while True:
        t0 = time.perf_counter()
        for _ in range(n):
            fn()
        dt = time.perf_counter() - t0
        if dt >= min_seconds:
            return dt / n
        n = max(n + 1, int(n * min_seconds / max(dt, 1e-9)) + 1)


def run(sizes=(100_000,), verbose=True):
    backends = {}
    for name in ("python", "c"):
        try:
            backends[name] = get_backend(name)
        except ImportError:
            if verbose:
                print("backend %r unavailable, skipping" % name)
    params = PairParams(D=1.0, a=1.0, kappa_a=2 * math.pi, kappa_d=1.0)
    results = {}
    for size in sizes:
        xs = np.linspace(1e-6, 80.0, size)
        for name, core in backends.items():
            t_b = _time(lambda: core.bessel4(xs))
            rate = core.make_rate(params.h_tilde, params.kappa_D_tilde)
            t_r = _time(lambda: rate(xs))

            def sweep():
                for tau in (0.01, 0.1, 1.0, 10.0):
                    integrate_damped(rate, tau, SWEEP_CONFIG)

            t_s = _time(sweep)
            results[(name, size)] = (t_b, t_r, t_s)
    if verbose:
        print("%-8s %-9s %12s %12s %14s" % ("backend", "n", "bessel4",
                                            "rate integrand",
                                            "4-point sweep"))
        for (name, size), (t_b, t_r, t_s) in sorted(results.items()):
            print("%-8s %-9d %10.3f us %10.3f us %12.3f us"
                  % (name, size, t_b * 1e6, t_r * 1e6, t_s * 1e6))
        have = {n for n, _ in results}
        if {"c", "python"} <= have:
            for size in sizes:
                sp = results[("python", size)][0] / results[("c", size)][0]
                print("bessel4 speedup at n=%d: %.1fx" % (size, sp))
    return results


if __name__ == "__main__":
    run()
