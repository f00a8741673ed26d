"""Hot numeric kernels.

Each kernel has a numba-jitted loop version and a numpy fallback.  The jitted
path is used when numba imports cleanly and the POLYWIT_PURE environment
variable is not set to 1; both paths compute identical results and the test
suite runs against whichever is selected.
"""

from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - environment dependent
    HAS_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(fn):
            return fn

        return wrap


USE_NUMBA = HAS_NUMBA and os.environ.get("POLYWIT_PURE", "0") != "1"


# ---------------------------------------------------------------------------
# Hamiltonian path reachability (Bellman-Held-Karp over bitmasks)


def _ham_path_reach_loops(adj):
    n = adj.shape[0]
    full = (1 << n) - 1
    reach = np.zeros(1 << n, dtype=np.int64)
    for v in range(n):
        reach[1 << v] = 1 << v
    for mask in range(1, full + 1):
        ends = reach[mask]
        if ends == 0:
            continue
        if mask == full:
            return True
        for v in range(n):
            if (ends >> v) & 1:
                for w in range(n):
                    if ((adj[v] >> w) & 1) and not ((mask >> w) & 1):
                        reach[mask | (1 << w)] |= 1 << w
    return reach[full] != 0


_ham_path_reach_jit = njit(cache=True)(_ham_path_reach_loops)


def ham_path_reach(adj: np.ndarray) -> bool:
    """True iff the digraph given by out-neighbor bitmasks has a Hamiltonian
    path."""
    n = adj.shape[0]
    if n == 0:
        return True
    if USE_NUMBA:
        return bool(_ham_path_reach_jit(adj.astype(np.int64)))
    # numpy fallback: propagate end-node masks over subsets
    adj = adj.astype(np.int64)
    full = (1 << n) - 1
    reach = np.zeros(1 << n, dtype=np.int64)
    reach[1 << np.arange(n)] = 1 << np.arange(n)
    for mask in range(1, full + 1):
        ends = int(reach[mask])
        if not ends:
            continue
        vs = [v for v in range(n) if ends >> v & 1]
        grow = 0
        for v in vs:
            grow |= int(adj[v]) & ~mask
        w = grow
        while w:
            bit = w & (-w)
            wi = bit.bit_length() - 1
            # only ends adjacent to wi extend to it
            if any(int(adj[v]) >> wi & 1 for v in vs):
                reach[mask | bit] |= bit
            w &= w - 1
    return bool(reach[full])


# ---------------------------------------------------------------------------
# maximum independent set size by subset scan


def _mis_size_loops(adj):
    n = adj.shape[0]
    best = 0
    for mask in range(1 << n):
        ok = True
        c = 0
        for v in range(n):
            if (mask >> v) & 1:
                if adj[v] & mask:
                    ok = False
                    break
                c += 1
        if ok and c > best:
            best = c
    return best


_mis_size_jit = njit(cache=True)(_mis_size_loops)


def mis_size(adj: np.ndarray) -> int:
    """Maximum independent-set size from undirected neighbor bitmasks."""
    n = adj.shape[0]
    if n == 0:
        return 0
    if USE_NUMBA:
        return int(_mis_size_jit(adj.astype(np.int64)))
    masks = np.arange(1 << n, dtype=np.int64)
    ok = np.ones(1 << n, dtype=bool)
    for v in range(n):
        in_set = (masks >> v) & 1 == 1
        clash = (masks & int(adj[v])) != 0
        ok &= ~(in_set & clash)
    pop = np.zeros(1 << n, dtype=np.int64)
    for v in range(n):
        pop += (masks >> v) & 1
    return int(pop[ok].max())


# ---------------------------------------------------------------------------
# splitter verification


@njit(cache=True)
def _verify_loops_jit(members, k, ell, mode_even, out_idx):
    """Scan k-subsets in lex order; return True and fill out_idx with the
    first subset no member handles, else False."""
    m, n = members.shape
    lo = k // ell
    hi = -(-k // ell)
    idx = np.zeros(k, dtype=np.int64)
    for i in range(k):
        idx[i] = i
    cnt = np.zeros(ell, dtype=np.int64)
    while True:
        covered = False
        for j in range(m):
            for c in range(ell):
                cnt[c] = 0
            good = True
            for i in range(k):
                col = members[j, idx[i]]
                cnt[col] += 1
            if mode_even:
                hit = 0
                for c in range(ell):
                    if cnt[c] > hi:
                        good = False
                        break
                    if cnt[c] >= 1:
                        hit += 1
                        if cnt[c] < lo:
                            good = False
                            break
                if good and lo >= 1 and hit != ell:
                    good = False
            else:
                for c in range(ell):
                    if cnt[c] > 1:
                        good = False
                        break
            if good:
                covered = True
                break
        if not covered:
            for i in range(k):
                out_idx[i] = idx[i]
            return True
        i = k - 1
        while i >= 0 and idx[i] == i + n - k:
            i -= 1
        if i < 0:
            return False
        idx[i] += 1
        for j2 in range(i + 1, k):
            idx[j2] = idx[j2 - 1] + 1


def verify_family(members: np.ndarray, k: int, ell: int, mode_even: bool):
    """Returns None if every k-subset is handled, else the lex-first failing
    subset as a tuple."""
    m, n = members.shape
    out_idx = np.zeros(k, dtype=np.int64)
    if USE_NUMBA:
        failed = _verify_loops_jit(
            members.astype(np.int64), k, ell, mode_even, out_idx
        )
        return tuple(int(x) for x in out_idx) if failed else None
    # numpy fallback: vectorize the member check per subset
    import itertools

    lo, hi = k // ell, -(-k // ell)
    for subset in itertools.combinations(range(n), k):
        cols = members[:, list(subset)]
        if mode_even:
            counts = np.stack([(cols == c).sum(axis=1) for c in range(ell)], axis=1)
            okay = (counts <= hi).all(axis=1)
            if lo >= 1:
                okay &= (counts >= lo).all(axis=1)
        else:
            srt = np.sort(cols, axis=1)
            okay = (np.diff(srt, axis=1) != 0).all(axis=1)
        if not okay.any():
            return subset
    return None


# ---------------------------------------------------------------------------
# greedy cover: per-member count of alive subsets it is injective on


def _greedy_counts_loops(members, subs, alive):
    m = members.shape[0]
    s, k = subs.shape
    counts = np.zeros(m, dtype=np.int64)
    for j in range(m):
        c = 0
        for t in range(s):
            if not alive[t]:
                continue
            good = True
            for a in range(k):
                ca = members[j, subs[t, a]]
                for b in range(a + 1, k):
                    if ca == members[j, subs[t, b]]:
                        good = False
                        break
                if not good:
                    break
            if good:
                c += 1
        counts[j] = c
    return counts


_greedy_counts_jit = njit(cache=True)(_greedy_counts_loops)


def greedy_counts(members: np.ndarray, subs: np.ndarray, alive: np.ndarray):
    """counts[j] = number of alive subsets member j colors injectively."""
    if USE_NUMBA:
        return _greedy_counts_jit(
            members.astype(np.int64), subs.astype(np.int64), alive
        )
    cols = members[:, subs]  # (m, s, k)
    srt = np.sort(cols, axis=2)
    inj = (np.diff(srt, axis=2) != 0).all(axis=2)  # (m, s)
    return (inj & alive[None, :]).sum(axis=1).astype(np.int64)


def injective_on(member_row: np.ndarray, subset) -> bool:
    vals = member_row[list(subset)]
    return len(set(vals.tolist())) == len(vals)


# ---------------------------------------------------------------------------
# circuit evaluation mod p (p small enough for int64 products)


_OP_INPUT, _OP_CONST, _OP_ADD, _OP_MUL = 0, 1, 2, 3


def _eval_circuit_loops(ops, arg_a, arg_b, point, p):
    vals = np.zeros(ops.shape[0], dtype=np.int64)
    for i in range(ops.shape[0]):
        op = ops[i]
        if op == 0:
            v = point[arg_a[i]]
        elif op == 1:
            v = arg_a[i]
        elif op == 2:
            v = vals[arg_a[i]] + vals[arg_b[i]]
        else:
            v = vals[arg_a[i]] * vals[arg_b[i]]
        vals[i] = v % p
    return vals


_eval_circuit_jit = njit(cache=True)(_eval_circuit_loops)

# int64 products of two residues stay exact below this modulus
MOD_EVAL_LIMIT = 1 << 31


def pack_circuit(gates, p):
    """Flatten a gate list into parallel arrays for the mod-p evaluator."""
    ops = np.zeros(len(gates), dtype=np.int64)
    arg_a = np.zeros(len(gates), dtype=np.int64)
    arg_b = np.zeros(len(gates), dtype=np.int64)
    for i, g in enumerate(gates):
        tag = g[0]
        if tag == "input":
            ops[i], arg_a[i] = _OP_INPUT, g[1]
        elif tag == "const":
            ops[i], arg_a[i] = _OP_CONST, g[1] % p
        elif tag == "add":
            ops[i], arg_a[i], arg_b[i] = _OP_ADD, g[1], g[2]
        else:
            ops[i], arg_a[i], arg_b[i] = _OP_MUL, g[1], g[2]
    return ops, arg_a, arg_b


def eval_circuit_mod(ops, arg_a, arg_b, point: np.ndarray, p: int):
    """Gate values mod p; caller guarantees p < MOD_EVAL_LIMIT."""
    if USE_NUMBA:
        return _eval_circuit_jit(ops, arg_a, arg_b, point.astype(np.int64), p)
    return _eval_circuit_loops(ops, arg_a, arg_b, point.astype(np.int64), p)
