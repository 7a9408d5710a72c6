#!/usr/bin/env python3
"""Benchmark the jitted kernels against their pure-numpy twins.

The auto backend switches on Hilbert dimension; this table is the evidence
behind the AUTO_NUMBA_MAX_DIM threshold in trotterlab.kernels.
"""

import time

import numpy as np

from trotterlab import _kernels_numba, _kernels_numpy


def random_hermitian(rng, d):
    m = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return (m + m.conj().T) / 2


def bench(fn, *args, repeats=3):
    fn(*args)  # warm-up / compile
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    rng = np.random.default_rng(0)
    print(f"{'kernel':24s} {'dim':>4s} {'steps':>7s} {'numba':>10s} {'numpy':>10s} {'ratio':>7s}")
    for d, steps in ((2, 200_000), (8, 50_000), (16, 20_000), (64, 2_000)):
        h1 = random_hermitian(rng, d)
        h2 = random_hermitian(rng, d)
        u_mid = np.linspace(0.0, 1.0, steps)
        t_nb = bench(_kernels_numba.midpoint_product, h1, h2, u_mid, 1e-3)
        t_np = bench(_kernels_numpy.midpoint_product, h1, h2, u_mid, 1e-3)
        print(f"{'midpoint_product':24s} {d:4d} {steps:7d} {t_nb:9.3f}s {t_np:9.3f}s "
              f"{t_np / t_nb:6.1f}x")

        la1, v1 = np.linalg.eigh(h1)
        la2, v2 = np.linalg.eigh(h2)
        w1 = rng.uniform(0.0, 1e-2, steps)
        w2 = rng.uniform(0.0, 1e-2, steps)
        t_nb = bench(_kernels_numba.trotter1_product, v1, la1, v2, la2, w1, w2)
        t_np = bench(_kernels_numpy.trotter1_product, v1, la1, v2, la2, w1, w2)
        print(f"{'trotter1_product':24s} {d:4d} {steps:7d} {t_nb:9.3f}s {t_np:9.3f}s "
              f"{t_np / t_nb:6.1f}x")


if __name__ == "__main__":
    main()
