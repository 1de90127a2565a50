#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallback.

Usage: python benchmarks/bench_kernels.py [n_points]

Imports both backends directly (ignores LSNFIT_DISABLE_NUMBA) and times the
hot paths: the erfc-based normal family, the quantile, Owen's T, the
skew-normal cdf, and the Monte Carlo chunk transform.
"""
import sys
import time

import numpy as np

from lsnfit._kernels import _numpy_impl as np_impl

try:
    from lsnfit._kernels import _numba_impl as nb_impl
except ImportError:
    print("numba backend unavailable; nothing to compare")
    sys.exit(1)


def timeit(fn, *args, repeat=5):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    n = int(sys.argv[1]) if len(sys.argv) > 1 else 1_000_000
    rng = np.random.default_rng(0)
    x = rng.uniform(-8.0, 8.0, n)
    p = rng.uniform(1e-12, 1.0 - 1e-12, n)
    z = rng.uniform(-10.0, 6.0, n)
    u = rng.uniform(1e-9, 1.0 - 1e-9, (n // 8, 8))
    mu = rng.normal(size=8)
    a = rng.normal(size=(8, 8))
    chol = np.linalg.cholesky(a @ a.T + 8.0 * np.eye(8))

    cases = [
        ("erfc", lambda impl: impl.erfc(x)),
        ("norm_cdf", lambda impl: impl.norm_cdf(x)),
        ("norm_ppf", lambda impl: impl.norm_ppf(p)),
        ("owens_t(a=1.5)", lambda impl: impl.owens_t(x, 1.5)),
        ("sn_cdf(lam=2)", lambda impl: impl.sn_cdf(z, 2.0)),
        ("chunk_sums(8 comp)", lambda impl: impl.chunk_sums(u, mu, chol)),
    ]

    # compile outside the timings
    for _, fn in cases:
        fn(nb_impl)

    print(f"{n} points, best of 5")
    print(f"{'kernel':<20s} {'numpy':>10s} {'numba':>10s} {'speedup':>9s}")
    for name, fn in cases:
        t_np = timeit(fn, np_impl)
        t_nb = timeit(fn, nb_impl)
        print(f"{name:<20s} {t_np * 1e3:9.1f}ms {t_nb * 1e3:9.1f}ms "
              f"{t_np / t_nb:8.1f}x")


if __name__ == "__main__":
    main()
