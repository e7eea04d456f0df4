"""Compare the compiled and pure-Python coordinate-descent kernels.

Run:  python3 benchmarks/bench_kernels.py
"""

import time

import numpy as np

from sparsedensity._kernels import KERNEL_BACKEND, cd_sweeps, cd_sweeps_py


def make_problem(M, seed):
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((M, 2 * M)) / np.sqrt(2 * M)
    G = A @ A.T
    d = np.sqrt(np.diag(G))
    G = G / np.outer(d, d)
    beta = rng.standard_normal(M) * 0.2
    eta = np.full(M, 0.05)
    return np.ascontiguousarray(G), beta, eta


def run(kernel, G, beta, eta, max_sweeps=500):
    lam = np.zeros(G.shape[0])
    q = np.zeros(G.shape[0])
    t0 = time.perf_counter()
    sweeps, change = kernel(G, beta, eta, lam, q, max_sweeps, 1e-10)
    return time.perf_counter() - t0, sweeps, lam


def main():
    print(f"active backend: {KERNEL_BACKEND}")
    print(f"{'M':>6} {'compiled (s)':>14} {'python (s)':>14} {'speedup':>9}")
    for M in (50, 200, 500, 1000):
        G, beta, eta = make_problem(M, seed=M)
        tc, sc, lam_c = run(cd_sweeps, G, beta, eta)
        tp, sp, lam_p = run(cd_sweeps_py, G, beta, eta)
        assert sc == sp and np.allclose(lam_c, lam_p, atol=1e-12), \
            "kernel results diverge"
        print(f"{M:>6} {tc:>14.4f} {tp:>14.4f} {tp / tc:>8.1f}x")


if __name__ == "__main__":
    main()
