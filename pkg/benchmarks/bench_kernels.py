"""Time the numba and numpy kernel paths on one grid shape.

    python benchmarks/bench_kernels.py --n 10 --m 256 --repeat 5

Also times one full prediction run under the active backend.
"""

import argparse
import time
import timeit

import numpy as np

from sparsepredict import _kernels as k
from sparsepredict.experiments import sparse_instance
from sparsepredict.predictor import predict_batch
from sparsepredict.state import random_state


def best_of(fn, repeat):
    fn()  # warm-up, includes numba compilation
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def kernel_cases(rows, m, rng):
    grid = (rng.standard_normal((rows, m)) + 1j * rng.standard_normal((rows, m))).astype(np.complex128)
    omega = rng.random(rows)
    turns = rng.random(m)
    shifts = rng.integers(0, m, rows)
    return {
        "fwht_rows": lambda impl: impl(grid.copy()),
        "outer_phase": lambda impl: impl(grid.copy(), omega, 37.0),
        "column_phase": lambda impl: impl(grid.copy(), turns),
        "xor_shift": lambda impl: impl(grid, shifts),
        "geometric_sum": lambda impl: impl(0.123456789, m * rows),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=10, help="main-register qubits (rows = 2**n)")
    ap.add_argument("--m", type=int, default=256, help="ancilla dimension")
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)

    rng = np.random.default_rng(0)
    rows = 1 << args.n
    print(f"grid {rows} x {args.m}, best of {args.repeat}")
    print(f"{'kernel':<14} {'numpy ms':>10} {'numba ms':>10} {'speedup':>8}")
    for name, call in kernel_cases(rows, args.m, rng).items():
        t_np = best_of(lambda: call(getattr(k, "np_" + name)), args.repeat)
        t_nb = best_of(lambda: call(getattr(k, "nb_" + name)), args.repeat)
        print(f"{name:<14} {1e3 * t_np:>10.3f} {1e3 * t_nb:>10.3f} {t_np / t_nb:>8.2f}")

    inst = sparse_instance(args.n, 5, 0.5)
    states = np.array([random_state(inst.u.N, rng) for _ in range(10)])
    start = time.perf_counter()
    predict_batch(states, inst.u, inst.params, inst.h, inst.params.t_max)
    print(f"predict_batch (10 states, backend {k.backend()}): {time.perf_counter() - start:.2f} s")


if __name__ == "__main__":
    main()
