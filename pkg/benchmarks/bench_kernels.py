"""Compare the jitted kernels against the pure numpy/python fallback.

Run with no arguments to benchmark both paths (the script re-executes itself
with POLYWIT_PURE=1 for the fallback) and print a speedup table:

    python3 benchmarks/bench_kernels.py

Each kernel is warmed up once before timing so jit compilation is excluded.
"""

import argparse
import os
import subprocess
import sys
import time

import numpy as np


def workload_circuit_eval():
    """Pipeline hot path: modular circuit evaluation over assignment points."""
    from polywit import formulations as fm
    from polywit import solvers as sv
    from polywit._kernels import eval_circuit_mod, pack_circuit
    from polywit.algebra import find_prime_in_dyadic_interval, reduce_mod
    from polywit.circuits import sum_of_products_circuit

    import random

    rng = random.Random(7)
    form = fm.formulate_hamiltonian_path(6, 3)
    pm = find_prime_in_dyadic_interval(len(form.poly.coeffs).bit_length())
    C = sum_of_products_circuit(reduce_mod(form.poly, pm))
    ops, arg_a, arg_b = pack_circuit(C.gates, pm.p)
    points = []
    for _ in range(60):
        edges = [
            (u, v)
            for u in range(6)
            for v in range(6)
            if u != v and rng.random() < 0.5
        ]
        G = sv.digraph(6, edges)
        bits = fm.assign_hamiltonian_path(G, 3).values
        points.append(np.array(bits, dtype=np.int64))

    def run():
        acc = 0
        for pt in points:
            acc ^= int(eval_circuit_mod(ops, arg_a, arg_b, pt, pm.p)[C.outputs[0]])
        return acc

    return run


def workload_ham_path_dp():
    """Bitmask reachability DP over random 13-node digraphs."""
    from polywit._kernels import ham_path_reach

    import random

    rng = random.Random(11)
    mats = []
    for _ in range(12):
        n = 13
        adj = np.zeros(n, dtype=np.int64)
        for u in range(n):
            for v in range(n):
                if u != v and rng.random() < 0.3:
                    adj[u] |= 1 << v
        mats.append(adj)

    def run():
        return sum(ham_path_reach(adj) for adj in mats)

    return run


def workload_splitter_verify():
    """Exhaustive injectivity check of a composed splitter family."""
    from polywit import splitters as sp
    from polywit._kernels import verify_family
    from polywit.splitters import members_array

    fam = sp.compose_splitter(12, 4, 2)
    arr = members_array(fam.members)

    def run():
        return verify_family(arr, fam.k, fam.ell, False)

    return run


WORKLOADS = {
    "circuit-eval": workload_circuit_eval,
    "ham-path-dp": workload_ham_path_dp,
    "splitter-verify": workload_splitter_verify,
}


def run_single():
    from polywit._kernels import USE_NUMBA

    mode = "jit" if USE_NUMBA else "pure"
    for name, factory in WORKLOADS.items():
        run = factory()
        run()  # warm-up: jit compilation and caches
        reps, best = 3, float("inf")
        for _ in range(reps):
            t0 = time.perf_counter()
            run()
            best = min(best, time.perf_counter() - t0)
        print(f"{name} {mode} {best:.4f}")


def run_both():
    env_jit = {k: v for k, v in os.environ.items() if k != "POLYWIT_PURE"}
    env_pure = dict(env_jit, POLYWIT_PURE="1")
    times = {}
    for label, env in (("jit", env_jit), ("pure", env_pure)):
        out = subprocess.run(
            [sys.executable, os.path.abspath(__file__), "--single"],
            env=env,
            capture_output=True,
            text=True,
            check=True,
        ).stdout
        for line in out.splitlines():
            name, mode, secs = line.split()
            times[name, label] = float(secs)
    print(f"{'kernel':<18}{'jit':>10}{'pure':>10}{'speedup':>10}")
    for name in WORKLOADS:
        tj, tp = times[name, "jit"], times[name, "pure"]
        print(f"{name:<18}{tj:>10.4f}{tp:>10.4f}{tp / tj:>9.1f}x")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument(
        "--single",
        action="store_true",
        help="benchmark only the currently selected kernel path",
    )
    args = ap.parse_args()
    if args.single:
        run_single()
    else:
        run_both()


if __name__ == "__main__":
    main()
