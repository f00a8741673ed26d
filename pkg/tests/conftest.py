"""Shared generators for randomized tests.

Everything is seeded explicitly so failures reproduce byte-for-byte.
"""

import random
import sys

from polywit.algebra import PrimeModulus, make_poly
from polywit.circuits import make_circuit


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """Echo the acceptance scoreboard after the usual pytest summary."""
    mod = sys.modules.get("test_acceptance") or sys.modules.get(
        "tests.test_acceptance"
    )
    results = getattr(mod, "RESULTS", None) if mod else None
    if results:
        terminalreporter.section("acceptance results")
        for line in results:
            terminalreporter.write_line(line)


def random_circuit(rng: random.Random, nvars=3, max_gates=30, modulus=None, max_deg=10):
    """A random topologically ordered circuit ending in a single output.

    Tracks a degree upper bound per gate and demotes mul to add when the
    product would exceed max_deg, so full symbolic expansion stays cheap.
    """
    gates = [("input", v) for v in range(nvars)]
    degs = [1] * nvars
    n_extra = rng.randint(1, max_gates - nvars)
    for _ in range(n_extra):
        r = rng.random()
        if r < 0.15:
            gates.append(("const", rng.randint(-3, 3)))
            degs.append(0)
        else:
            op = "add" if r < 0.55 else "mul"
            a = rng.randrange(len(gates))
            b = rng.randrange(len(gates))
            if op == "mul" and degs[a] + degs[b] > max_deg:
                op = "add"
            gates.append((op, a, b))
            degs.append(degs[a] + degs[b] if op == "mul" else max(degs[a], degs[b]))
    return make_circuit(nvars, gates, (len(gates) - 1,), modulus)


def random_poly(rng: random.Random, nvars=4, max_terms=12, max_degree=4, modulus=None):
    terms = {}
    for _ in range(rng.randint(0, max_terms)):
        deg = rng.randint(0, max_degree)
        exps = {}
        for _ in range(deg):
            v = rng.randrange(nvars)
            exps[v] = exps.get(v, 0) + 1
        mono = tuple(sorted(exps.items()))
        coeff = rng.randint(1, 50) if modulus else rng.randint(-20, 20)
        terms[mono] = terms.get(mono, 0) + coeff
    return make_poly(nvars, terms, modulus)


def random_digraph_edges(rng: random.Random, n: int, density=0.4):
    return frozenset(
        (u, v)
        for u in range(n)
        for v in range(n)
        if u != v and rng.random() < density
    )


def random_graph_edges(rng: random.Random, n: int, density=0.4):
    return frozenset(
        (u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < density
    )
