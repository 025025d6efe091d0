"""Time the numba and numpy kernel backends side by side.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from edgeworth.kernels import numba_backend, numpy_backend
from edgeworth.networks import weights_from_probabilities

SIZES = [(2, 2), (2, 3), (3, 10), (5, 40)]


def kernel_case(m, n, seed=0):
    rng = np.random.default_rng(seed)
    X = rng.uniform(0.5, 5.0, size=(m, n))
    A = rng.uniform(0.2, 1.0, size=(m, n))
    A /= A.sum(axis=0)
    W = weights_from_probabilities(rng.dirichlet(np.ones(n))).weights
    return X, A, W


def time_call(fn, repeat):
    fn()  # warm-up (and JIT compile)
    best = min(timeit.repeat(fn, number=1, repeat=repeat))
    return best * 1e6


def kernel_table(repeat):
    print(f"{'kernel':<12}{'m x n':>8}{'numpy us':>12}{'numba us':>12}{'speed-up':>10}")
    for m, n in SIZES:
        X, A, W = kernel_case(m, n)
        F, _ = numpy_backend.rhs(X, A, W, 1e-8, 1.0, 1e-9)
        calls = {
            "rhs": lambda b: b.rhs(X, A, W, 1e-8, 1.0, 1e-9),
            "dp_trial": lambda b: b.dp_trial(X, F, A, W, 0.01, 1e-10, 1e-8, 1.0, 1e-9),
        }
        for name, call in calls.items():
            t_np = time_call(lambda: call(numpy_backend), repeat)
            t_nb = time_call(lambda: call(numba_backend), repeat)
            print(f"{name:<12}{f'{m}x{n}':>8}{t_np:>12.1f}{t_nb:>12.1f}{t_np / t_nb:>10.1f}")


SWEEP_SNIPPET = """
import time
from edgeworth.scenario import load_scenario
from edgeworth.sweep import run_sweep
from edgeworth.integrate import integrate_to_equilibrium
sc = load_scenario("three_agent_mixed")
integrate_to_equilibrium(sc)
t0 = time.perf_counter()
run_sweep(sc, 12, workers=1)
print(time.perf_counter() - t0)
"""


def end_to_end():
    print("\nresolution-12 sweep of three_agent_mixed, one worker (seconds):")
    for label, flag in (("numba", "0"), ("numpy", "1")):
        env = dict(os.environ, EDGEWORTH_DISABLE_JIT=flag)
        out = subprocess.run([sys.executable, "-c", SWEEP_SNIPPET], env=env, capture_output=True, text=True, check=True)
        print(f"  {label:<6}{float(out.stdout.strip()):8.2f}")


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=200)
    parser.add_argument("--skip-sweep", action="store_true")
    args = parser.parse_args()
    if numba_backend is None:
        sys.exit("numba is not installed")
    kernel_table(args.repeat)
    if not args.skip_sweep:
        end_to_end()


if __name__ == "__main__":
    main()
