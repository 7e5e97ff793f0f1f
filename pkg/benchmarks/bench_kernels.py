#!/usr/bin/env python3
"""Micro-benchmarks for the hot kernels, numba lane vs numpy fallback.

Default mode runs the whole suite twice in subprocesses -- once with
SCHUR_LATTICE_BACKEND=numba and once with SCHUR_LATTICE_BACKEND=numpy --
and prints both tables, so the JIT speedup can be read off directly:

    python3 benchmarks/bench_kernels.py

Pass --single to benchmark only the backend active in this process.
"""

import argparse
import os
import subprocess
import sys
import time

import numpy as np


def _bench(label, fn, reps, warmup=1):
    for _ in range(warmup):
        fn()
    t0 = time.perf_counter()
    for _ in range(reps):
        fn()
    total = time.perf_counter() - t0
    return label, reps, total


def run_suite():
    from schur_lattice._kernels import (BACKEND, digit_histogram, gf_matmul,
                                        gf_rref, line_spin_profile,
                                        minplus_closure_matrix,
                                        residue_ring_closure_rank,
                                        spin_closure)
    from schur_lattice.fields import GF

    rng = np.random.default_rng(0)
    rows = []

    f2, f4 = GF(2), GF(4)
    a2 = rng.integers(0, 2, size=(200, 200), dtype=np.int64)
    b2 = rng.integers(0, 2, size=(200, 200), dtype=np.int64)
    rows.append(_bench("gf_matmul GF(2) 200x200", lambda: gf_matmul(f2, a2, b2), 50))

    a4 = rng.integers(0, 4, size=(120, 120), dtype=np.int64)
    b4 = rng.integers(0, 4, size=(120, 120), dtype=np.int64)
    rows.append(_bench("gf_matmul GF(4) 120x120", lambda: gf_matmul(f4, a4, b4), 20))

    m4 = rng.integers(0, 4, size=(120, 160), dtype=np.int64)
    rows.append(_bench("gf_rref   GF(4) 120x160",
                       lambda: gf_rref(f4, m4.tolist()), 5))

    N = 10
    e12 = np.zeros((N, N), dtype=np.int64)
    e12[0, 1] = 1
    e21 = np.zeros((N, N), dtype=np.int64)
    e21[1, 0] = 1
    cyc = np.roll(np.eye(N, dtype=np.int64), 1, axis=1)
    rows.append(_bench(f"ring closure GF(2) N={N}",
                       lambda: residue_ring_closure_rank(f2, [e12, e21, cyc], N), 3))

    dim = 40
    mats = [rng.integers(0, 3, size=(dim, dim), dtype=np.int64)
            for _ in range(3)]
    seeds = [rng.integers(0, 3, size=dim, dtype=np.int64)]
    f3 = GF(3)
    rows.append(_bench(f"spin closure GF(3) dim={dim}",
                       lambda: spin_closure(f3, seeds, mats), 5))

    Nl = 8
    jord = np.eye(Nl, dtype=np.int64)
    for i in range(Nl - 1):
        jord[i, i + 1] = 1
    diag = np.diag(np.arange(Nl, dtype=np.int64) % 3)
    rows.append(_bench(f"line spins GF(3) N={Nl} (3^{Nl} lines)",
                       lambda: line_spin_profile(f3, [jord, diag], Nl), 1))

    D = rng.integers(0, 50, size=(250, 250)).tolist()
    rows.append(_bench("minplus closure 250x250",
                       lambda: minplus_closure_matrix(D), 3))

    digits = rng.integers(0, 3, size=(15, 1_000_000), dtype=np.int64)
    rows.append(_bench("digit_histogram 15x1e6",
                       lambda: digit_histogram(digits, 3), 10))

    print(f"backend: {BACKEND}")
    print(f"{'kernel':<33} {'reps':>4} {'total s':>9} {'per-op ms':>10}")
    for label, reps, total in rows:
        print(f"{label:<33} {reps:>4} {total:>9.3f} {total / reps * 1e3:>10.2f}")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--single", action="store_true",
                        help="benchmark only the active backend")
    args = parser.parse_args()
    if args.single:
        run_suite()
        return
    for backend in ("numba", "numpy"):
        env = dict(os.environ, SCHUR_LATTICE_BACKEND=backend)
        subprocess.run([sys.executable, __file__, "--single"], env=env,
                       check=True)
        print()


if __name__ == "__main__":
    main()
