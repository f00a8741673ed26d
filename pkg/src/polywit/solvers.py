"""Exact exponential-time and FPT oracles, tree partitioning, subset graphs.

These serve two roles: computing variable assignments for the polynomial
formulations, and acting as ground-truth deciders in tests.  Everything is
exact and desk-scale; explicit guards turn would-be blowups into parameter
errors.

The sentinel end for Hamiltonian segments is None: ham_segment(G, S, u, None)
asks only for a Hamiltonian path of G[S] starting at u, with no constraint on
where it exits.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from . import _kernels
from .errors import FormatError, ParameterError

INF = 10**15


# ---------------------------------------------------------------------------
# instance types


@dataclass(frozen=True)
class DirectedGraph:
    n: int
    edges: frozenset  # of (u, v) pairs, u != v


@dataclass(frozen=True)
class UndirectedGraph:
    n: int
    edges: frozenset  # of (u, v) pairs with u < v
    weights: Optional[tuple] = None  # parallel to sorted(edges) when present

    def weight(self, u: int, v: int) -> int:
        if self.weights is None:
            return 1
        e = (u, v) if u < v else (v, u)
        return dict(zip(sorted(self.edges), self.weights))[e]


@dataclass(frozen=True)
class CnfFormula:
    nvars: int
    clauses: tuple  # of frozensets of DIMACS literals (+-(var+1))
    width: int  # max clause size


@dataclass(frozen=True)
class SetFamily:
    n: int
    sets: tuple  # of frozensets over range(n)


@dataclass(frozen=True)
class TripartiteHypergraph:
    n: int  # size of each part
    triples: frozenset  # of (a, b, c) with entries in range(n)


def digraph(n: int, edges: Iterable) -> DirectedGraph:
    es = set()
    for u, v in edges:
        if not (0 <= u < n and 0 <= v < n) or u == v:
            raise ParameterError(f"bad directed edge ({u}, {v}) for n={n}")
        es.add((u, v))
    return DirectedGraph(n, frozenset(es))


def ugraph(n: int, edges: Iterable, weights: Optional[dict] = None) -> UndirectedGraph:
    es = set()
    for u, v in edges:
        if not (0 <= u < n and 0 <= v < n) or u == v:
            raise ParameterError(f"bad edge ({u}, {v}) for n={n}")
        es.add((min(u, v), max(u, v)))
    es = frozenset(es)
    wt = None
    if weights is not None:
        norm = {(min(u, v), max(u, v)): w for (u, v), w in weights.items()}
        if set(norm) != set(es):
            raise ParameterError("weights must cover exactly the edge set")
        if any(w < 0 for w in norm.values()):
            raise ParameterError("negative edge weight")
        wt = tuple(norm[e] for e in sorted(es))
    return UndirectedGraph(n, es, wt)


def out_masks(G: DirectedGraph) -> np.ndarray:
    adj = np.zeros(G.n, dtype=np.int64)
    for u, v in G.edges:
        adj[u] |= 1 << v
    return adj


def adj_masks(G: UndirectedGraph) -> np.ndarray:
    adj = np.zeros(G.n, dtype=np.int64)
    for u, v in G.edges:
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    return adj


def complement(G: UndirectedGraph) -> UndirectedGraph:
    all_edges = {(u, v) for u in range(G.n) for v in range(u + 1, G.n)}
    return UndirectedGraph(G.n, frozenset(all_edges - set(G.edges)))


def has_edge(G, u: int, v: int) -> bool:
    if isinstance(G, DirectedGraph):
        return (u, v) in G.edges
    return (min(u, v), max(u, v)) in G.edges


def neighbors_out(G, u: int) -> list:
    if isinstance(G, DirectedGraph):
        return [v for v in range(G.n) if (u, v) in G.edges]
    return [v for v in range(G.n) if has_edge(G, u, v)]


# ---------------------------------------------------------------------------
# Hamiltonian path machinery


def ham_segment(G: DirectedGraph, S: Iterable, u: int, v) -> bool:
    """True iff G[S] has a Hamiltonian path starting at u whose last node w
    has the edge (w, v), or any last node when v is the sentinel None."""
    S = frozenset(S)
    if u not in S:
        raise ParameterError("start node must lie in the segment")
    if v is not None and v in S:
        raise ParameterError("end target must lie outside the segment")
    nodes = sorted(S)
    pos = {x: i for i, x in enumerate(nodes)}
    m = len(nodes)
    adj = [0] * m
    for i, x in enumerate(nodes):
        for y in nodes:
            if (x, y) in G.edges:
                adj[i] |= 1 << pos[y]
    full = (1 << m) - 1
    start = pos[u]
    dp = [0] * (1 << m)  # dp[mask] = bitmask of feasible end positions
    dp[1 << start] = 1 << start
    for mask in range(1 << m):
        ends = dp[mask]
        if not ends:
            continue
        for i in range(m):
            if ends >> i & 1:
                ext = adj[i] & ~mask
                while ext:
                    b = ext & (-ext)
                    dp[mask | b] |= b
                    ext &= ext - 1
    finals = dp[full]
    if not finals:
        return False
    if v is None:
        return True
    return any(
        finals >> i & 1 and (nodes[i], v) in G.edges for i in range(m)
    )


def hamiltonian_path(G: DirectedGraph) -> bool:
    """Bellman-Held-Karp bitmask DP over all start nodes."""
    if G.n == 0:
        return True
    return _kernels.ham_path_reach(out_masks(G))


def hamiltonian_cycle(G: DirectedGraph) -> bool:
    """Directed cycle visiting every node exactly once (n=1 counts)."""
    n = G.n
    if n == 0:
        return True
    if n == 1:
        return True
    adj = out_masks(G)
    dp = [0] * (1 << n)
    dp[1] = 1  # paths start at node 0
    for mask in range(1, 1 << n, 2):
        ends = dp[mask]
        if not ends:
            continue
        for v in range(n):
            if ends >> v & 1:
                ext = int(adj[v]) & ~mask
                while ext:
                    b = ext & (-ext)
                    dp[mask | b] |= b
                    ext &= ext - 1
    finals = dp[(1 << n) - 1]
    return any(finals >> v & 1 and (v, 0) in G.edges for v in range(n))


# ---------------------------------------------------------------------------
# independent set family


def is_independent(G: UndirectedGraph, S: Iterable) -> bool:
    S = frozenset(S)
    return not any(u in S and v in S for u, v in G.edges)


def max_independent_set(G: UndirectedGraph) -> int:
    if G.n == 0:
        return 0
    return _kernels.mis_size(adj_masks(G))


def chromatic_at_most(G: UndirectedGraph, r: int) -> bool:
    """chi(G) <= r by inclusion-exclusion over independent-set counts."""
    if r < 0:
        raise ParameterError("color budget must be nonnegative")
    if G.n > 20:
        raise ParameterError("chromatic oracle capped at n <= 20")
    n = G.n
    if n == 0:
        return True
    if r == 0:
        return False
    adj = [0] * n
    for u, v in G.edges:
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    size = 1 << n
    ind = [0] * size  # number of independent subsets of G[S]
    ind[0] = 1
    for mask in range(1, size):
        v = (mask & (-mask)).bit_length() - 1
        without = mask ^ (1 << v)
        ind[mask] = ind[without] + ind[without & ~adj[v]]
    total = 0
    for mask in range(size):
        cov = ind[mask] ** r
        bits = bin(mask).count("1")
        total += cov if (n - bits) % 2 == 0 else -cov
    return total > 0


# ---------------------------------------------------------------------------
# covering and matching


def set_cover_at_most(F: SetFamily, U: Iterable, r: int) -> bool:
    """Can U be covered by at most r sets of F?  DP over subsets of U."""
    U = frozenset(U)
    if r < 0:
        raise ParameterError("cover budget must be nonnegative")
    elems = sorted(U)
    pos = {x: i for i, x in enumerate(elems)}
    m = len(elems)
    if m > 22:
        raise ParameterError("set cover oracle capped at |U| <= 22")
    masks = []
    for s in F.sets:
        mk = 0
        for x in s:
            if x in pos:
                mk |= 1 << pos[x]
        if mk:
            masks.append(mk)
    full = (1 << m) - 1
    best = [INF] * (full + 1)
    best[0] = 0
    for mask in range(full + 1):
        if best[mask] >= INF:
            continue
        for mk in masks:
            nxt = mask | mk
            if best[nxt] > best[mask] + 1:
                best[nxt] = best[mask] + 1
    return best[full] <= r


def matching3d_max(H: TripartiteHypergraph, A: Iterable, B: Iterable, C: Iterable) -> int:
    """Maximum matching inside A x B x C via the memoized take-a-triple
    recurrence."""
    A, B, C = frozenset(A), frozenset(B), frozenset(C)
    if not (len(A) == len(B) == len(C)):
        raise ParameterError("parts must have equal size")
    triples = [t for t in H.triples if t[0] in A and t[1] in B and t[2] in C]
    memo: dict = {}

    def rec(a, b, c):
        key = (a, b, c)
        if key in memo:
            return memo[key]
        best = 0
        for (x, y, z) in triples:
            if x in a and y in b and z in c:
                got = 1 + rec(a - {x}, b - {y}, c - {z})
                if got > best:
                    best = got
        memo[key] = best
        return best

    return rec(A, B, C)


def sat_count_restricted(F: CnfFormula, B_vars: Iterable, tau: dict, clause_ids: Iterable) -> int:
    """Number of the given clauses satisfied by tau, which must assign
    exactly the variables B_vars."""
    B_vars = frozenset(B_vars)
    if frozenset(tau) != B_vars:
        raise ParameterError("assignment must cover exactly the block variables")
    count = 0
    for ci in clause_ids:
        clause = F.clauses[ci]
        for lit in clause:
            var = abs(lit) - 1
            if var in tau and tau[var] == (lit > 0):
                count += 1
                break
    return count


# ---------------------------------------------------------------------------
# colorful paths


def colorful_path_exact(G, f: Sequence[int], Cset: Iterable, u: int, v: int) -> bool:
    """True iff a path from u to v uses each color of Cset exactly once and
    no other color (so its length is exactly |Cset|)."""
    Cset = frozenset(Cset)
    if f[u] not in Cset or f[v] not in Cset:
        raise ParameterError("endpoint colors must lie in the color set")
    colors = sorted(Cset)
    cpos = {c: i for i, c in enumerate(colors)}
    m = len(colors)
    full = (1 << m) - 1
    # reach[mask] = set of nodes w: path u->w using exactly the colors in mask
    reach = [set() for _ in range(full + 1)]
    reach[1 << cpos[f[u]]].add(u)
    order = sorted(range(1, full + 1), key=lambda x: bin(x).count("1"))
    for mask in order:
        for w in reach[mask]:
            for x in neighbors_out(G, w):
                cx = f[x]
                if cx in cpos and not (mask >> cpos[cx]) & 1:
                    reach[mask | (1 << cpos[cx])].add(x)
    return v in reach[full]


# ---------------------------------------------------------------------------
# Steiner trees


def steiner_tree_min(G: UndirectedGraph, T: Iterable):
    """Dreyfus-Wagner minimum Steiner tree weight; None if T is not
    connectable."""
    T = sorted(frozenset(T))
    if len(T) > 10:
        raise ParameterError("Steiner oracle capped at |T| <= 10")
    n = G.n
    if not T:
        return 0
    for t in T:
        if not 0 <= t < n:
            raise ParameterError(f"terminal {t} out of range")
    dist = [[0 if i == j else INF for j in range(n)] for i in range(n)]
    for u, v in G.edges:
        w = G.weight(u, v)
        if w < dist[u][v]:
            dist[u][v] = dist[v][u] = w
    for k in range(n):
        for i in range(n):
            dk = dist[i][k]
            if dk >= INF:
                continue
            for j in range(n):
                if dk + dist[k][j] < dist[i][j]:
                    dist[i][j] = dk + dist[k][j]
    m = len(T)
    full = (1 << m) - 1
    dp = [[INF] * n for _ in range(full + 1)]
    for i, t in enumerate(T):
        for v in range(n):
            dp[1 << i][v] = dist[t][v]
    for mask in range(1, full + 1):
        if mask & (mask - 1) == 0:
            continue
        cur = dp[mask]
        # merge two sub-terminal trees at v
        sub = (mask - 1) & mask
        while sub:
            if sub < (mask ^ sub):  # each split once
                a, b = dp[sub], dp[mask ^ sub]
                for v in range(n):
                    s = a[v] + b[v]
                    if s < cur[v]:
                        cur[v] = s
            sub = (sub - 1) & mask
        # relax through the metric closure
        best = [min(cur[u] + dist[u][v] for u in range(n)) for v in range(n)]
        for v in range(n):
            if best[v] < cur[v]:
                cur[v] = best[v]
    res = min(dp[full][t] for t in T)
    return None if res >= INF else res


# ---------------------------------------------------------------------------
# spanning trees by enumeration


def _spanning_tree_optima(G: UndirectedGraph):
    """(max internal nodes, max leaves) over all spanning trees."""
    n = G.n
    if n > 9:
        raise ParameterError("spanning tree enumeration capped at n <= 9")
    edges = sorted(G.edges)
    m = len(edges)
    if n == 1:
        return 0, 0
    best_internal = -1
    best_leaf = -1

    def find(parent, x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def rec(i, parent, chosen, degrees):
        nonlocal best_internal, best_leaf
        if chosen == n - 1:
            internal = sum(1 for d in degrees if d >= 2)
            leaves = sum(1 for d in degrees if d == 1)
            best_internal = max(best_internal, internal)
            best_leaf = max(best_leaf, leaves)
            return
        if m - i < n - 1 - chosen:
            return
        u, v = edges[i]
        ru, rv = find(parent, u), find(parent, v)
        if ru != rv:
            p2 = list(parent)
            p2[ru] = rv
            d2 = list(degrees)
            d2[u] += 1
            d2[v] += 1
            rec(i + 1, p2, chosen + 1, d2)
        rec(i + 1, parent, chosen, degrees)

    rec(0, list(range(n)), 0, [0] * n)
    if best_internal < 0:
        raise ParameterError("graph is not connected")
    return best_internal, best_leaf


def spanning_tree_internal_max(G: UndirectedGraph) -> int:
    return _spanning_tree_optima(G)[0]


def spanning_tree_leaf_max(G: UndirectedGraph) -> int:
    return _spanning_tree_optima(G)[1]


def is_connected(G: UndirectedGraph) -> bool:
    if G.n == 0:
        return True
    seen = {0}
    stack = [0]
    while stack:
        x = stack.pop()
        for y in neighbors_out(G, x):
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == G.n


# ---------------------------------------------------------------------------
# domination and splitting


def dominated_check(G: UndirectedGraph, N: Iterable, D: Iterable) -> bool:
    """Every node of N has a neighbor in D."""
    D = frozenset(D)
    return all(any(has_edge(G, v, u) for u in D) for v in N)


def split_check(A: Iterable, B: Iterable, S: Iterable) -> bool:
    """S meets both sides of the disjoint pair (A, B)."""
    A, B, S = frozenset(A), frozenset(B), frozenset(S)
    if A & B:
        raise ParameterError("sides must be disjoint")
    return bool(S & A) and bool(S & B)


# ---------------------------------------------------------------------------
# tree partitioning


@dataclass(frozen=True)
class RootedTree:
    n: int
    root: int
    children: tuple  # children[u] = tuple of child nodes
    parent: tuple  # parent[root] = -1


def root_tree(n: int, edges: Iterable, root: int = 0) -> RootedTree:
    adj = [[] for _ in range(n)]
    cnt = 0
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
        cnt += 1
    if cnt != n - 1:
        raise ParameterError(f"a tree on {n} nodes has {n - 1} edges, got {cnt}")
    parent = [-1] * n
    children = [[] for _ in range(n)]
    seen = [False] * n
    seen[root] = True
    order = [root]
    for x in order:
        for y in sorted(adj[x]):
            if not seen[y]:
                seen[y] = True
                parent[y] = x
                children[x].append(y)
                order.append(y)
    if not all(seen):
        raise ParameterError("edge list is not connected")
    return RootedTree(n, root, tuple(tuple(c) for c in children), tuple(parent))


def _subtree_nodes(T: RootedTree, u: int) -> set:
    out = {u}
    stack = [u]
    while stack:
        x = stack.pop()
        for y in T.children[x]:
            out.add(y)
            stack.append(y)
    return out


def tree_find_subtree(T: RootedTree, M: Iterable, ell: int):
    """A subtree U rooted at some u with ell/2 <= |M cap (V(U) - {u})| <= ell,
    such that removing V(U) - {u} keeps the tree connected.

    Requires |M cap V(T)| > ell.  Three-case descent: recurse into a child
    whose subtree holds more than ell marks; else take one child subtree
    holding at least ell/2 plus the root; else absorb children left to right
    until the prefix holds at least ell/2 (each holds under ell/2, so the
    prefix stays at most ell).
    """
    M = frozenset(M)
    counts = [0] * T.n
    # bottom-up marked counts per subtree
    post = []
    stack = [T.root]
    while stack:
        x = stack.pop()
        post.append(x)
        stack.extend(T.children[x])
    for x in reversed(post):
        counts[x] = (1 if x in M else 0) + sum(counts[c] for c in T.children[x])
    if counts[T.root] <= ell:
        raise ParameterError("tree does not hold more than ell marked nodes")

    u = T.root
    while True:
        heavy = None
        for c in T.children[u]:
            if counts[c] > ell:
                heavy = c
                break
        if heavy is not None:
            u = heavy
            continue
        for c in T.children[u]:
            if 2 * counts[c] >= ell:  # counts[c] <= ell holds here
                return _subtree_nodes(T, c) | {u}, u
        acc = 0
        taken = set()
        for c in T.children[u]:
            acc += counts[c]
            taken |= _subtree_nodes(T, c)
            if 2 * acc >= ell:
                return taken | {u}, u
        # unreachable: the subtree at u holds > ell marks, all in children
        raise AssertionError("prefix accumulation failed")


def tree_edge_partition(n: int, edges: Iterable, M: Iterable, theta: int):
    """Partition the tree's edges into at most theta blocks, each inducing a
    connected subtree holding at most 2k/(theta-1) + 2 marked nodes
    (k = |M|).  Peels subtrees found by tree_find_subtree with
    ell = ceil(2k/(theta-1))."""
    if theta < 2:
        raise ParameterError("theta must be at least 2")
    edges = [(min(u, v), max(u, v)) for u, v in edges]
    M = frozenset(M)
    k = len(M & set(range(n)))
    ell = -(-2 * k // (theta - 1))
    blocks = []
    alive_edges = set(edges)
    alive_nodes = set(range(n))

    def marked_alive():
        return len(M & alive_nodes)

    while marked_alive() > ell:
        sub_n = len(alive_nodes)
        relab = {x: i for i, x in enumerate(sorted(alive_nodes))}
        back = sorted(alive_nodes)
        sub_edges = [(relab[u], relab[v]) for u, v in alive_edges]
        T = root_tree(sub_n, sub_edges, 0)
        sub_M = {relab[x] for x in M & alive_nodes}
        U, u = tree_find_subtree(T, sub_M, ell)
        U_orig = {back[x] for x in U}
        u_orig = back[u]
        block = {e for e in alive_edges if e[0] in U_orig and e[1] in U_orig}
        blocks.append(sorted(block))
        alive_edges -= block
        alive_nodes -= U_orig - {u_orig}
    if alive_edges:
        blocks.append(sorted(alive_edges))
    return blocks


# ---------------------------------------------------------------------------
# subset graphs


@dataclass(frozen=True)
class SubsetGraph:
    m: int  # number of set nodes
    connectors: tuple  # sorted elements lying in >= 2 sets
    edges: frozenset  # of (set index, connector element)

    def node_count(self) -> int:
        return self.m + len(self.connectors)

    def is_connected(self) -> bool:
        if self.node_count() == 0:
            return True
        adj: dict = {("s", i): [] for i in range(self.m)}
        for c in self.connectors:
            adj[("c", c)] = []
        for i, c in self.edges:
            adj[("s", i)].append(("c", c))
            adj[("c", c)].append(("s", i))
        start = next(iter(adj))
        seen = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return len(seen) == len(adj)

    def is_tree(self) -> bool:
        return self.is_connected() and len(self.edges) == self.node_count() - 1


def subset_graph(sets: Sequence[Iterable]) -> SubsetGraph:
    """The bipartite graph joining each set to the elements it shares with
    another set."""
    sets = [frozenset(s) for s in sets]
    seen_in: dict = {}
    for i, s in enumerate(sets):
        for x in s:
            seen_in.setdefault(x, set()).add(i)
    connectors = tuple(sorted(x for x, owners in seen_in.items() if len(owners) >= 2))
    cset = set(connectors)
    edges = frozenset(
        (i, x) for i, s in enumerate(sets) for x in s if x in cset
    )
    return SubsetGraph(len(sets), connectors, edges)


# ---------------------------------------------------------------------------
# instance file formats


def _header_fields(line: str, tag: str, keys: Sequence[str]) -> dict:
    parts = line.split()
    if not parts or parts[0] != tag:
        raise FormatError(f"expected '{tag}' header, got {line!r}")
    fields = {}
    for p in parts[1:]:
        if "=" not in p:
            raise FormatError(f"bad header field {p!r}")
        k, v = p.split("=", 1)
        try:
            fields[k] = int(v)
        except ValueError:
            raise FormatError(f"non-integer header field {p!r}") from None
    for k in keys:
        if k not in fields:
            raise FormatError(f"missing {k}= in {line!r}")
    return fields


def parse_graph(text: str):
    """Parse `graph directed=<0|1> weighted=<0|1> n=<n> m=<m>` plus m edge
    lines `u v [w]` (0-based)."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise FormatError("empty graph file")
    h = _header_fields(lines[0], "graph", ("directed", "weighted", "n", "m"))
    directed, weighted, n, m = h["directed"], h["weighted"], h["n"], h["m"]
    if directed not in (0, 1) or weighted not in (0, 1):
        raise FormatError("directed/weighted flags must be 0 or 1")
    if directed and weighted:
        raise FormatError("weighted graphs are undirected here")
    if len(lines) - 1 != m:
        raise FormatError(f"expected {m} edge lines, got {len(lines) - 1}")
    edges = []
    weights = {}
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 2 + weighted:
            raise FormatError(f"bad edge line {ln!r}")
        try:
            nums = [int(x) for x in parts]
        except ValueError:
            raise FormatError(f"bad edge line {ln!r}") from None
        u, v = nums[0], nums[1]
        if not (0 <= u < n and 0 <= v < n) or u == v:
            raise FormatError(f"edge ({u}, {v}) out of range for n={n}")
        key = (u, v) if directed else (min(u, v), max(u, v))
        if key in edges:
            raise FormatError(f"duplicate edge in {ln!r}")
        edges.append(key)
        if weighted:
            if nums[2] < 0:
                raise FormatError("negative edge weight")
            weights[key] = nums[2]
    if directed:
        return DirectedGraph(n, frozenset(edges))
    return ugraph(n, edges, weights if weighted else None)


def format_graph(G) -> str:
    directed = isinstance(G, DirectedGraph)
    weighted = (not directed) and G.weights is not None
    lines = [
        f"graph directed={int(directed)} weighted={int(weighted)}"
        f" n={G.n} m={len(G.edges)}"
    ]
    for e in sorted(G.edges):
        if weighted:
            lines.append(f"{e[0]} {e[1]} {G.weight(*e)}")
        else:
            lines.append(f"{e[0]} {e[1]}")
    return "\n".join(lines) + "\n"


def parse_cnf(text: str) -> CnfFormula:
    """DIMACS CNF."""
    nvars = nclauses = None
    clauses = []
    for ln in text.splitlines():
        ln = ln.strip()
        if not ln or ln.startswith("c"):
            continue
        if ln.startswith("p"):
            parts = ln.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise FormatError(f"bad problem line {ln!r}")
            try:
                nvars, nclauses = int(parts[2]), int(parts[3])
            except ValueError:
                raise FormatError(f"bad problem line {ln!r}") from None
            continue
        if nvars is None:
            raise FormatError("clause before problem line")
        try:
            lits = [int(x) for x in ln.split()]
        except ValueError:
            raise FormatError(f"bad clause line {ln!r}") from None
        if not lits or lits[-1] != 0:
            raise FormatError(f"clause line must end with 0: {ln!r}")
        lits = lits[:-1]
        if not lits:
            raise FormatError("empty clause")
        for lit in lits:
            if lit == 0 or abs(lit) > nvars:
                raise FormatError(f"literal {lit} out of range")
        clauses.append(frozenset(lits))
    if nvars is None:
        raise FormatError("missing problem line")
    if nclauses is not None and len(clauses) != nclauses:
        raise FormatError(f"expected {nclauses} clauses, got {len(clauses)}")
    width = max((len(c) for c in clauses), default=0)
    return CnfFormula(nvars, tuple(clauses), width)


def format_cnf(F: CnfFormula) -> str:
    lines = [f"p cnf {F.nvars} {len(F.clauses)}"]
    for c in F.clauses:
        lines.append(" ".join(str(x) for x in sorted(c, key=abs)) + " 0")
    return "\n".join(lines) + "\n"


def parse_family(text: str) -> SetFamily:
    """`family n=<n> m=<m>` then one line of space-separated elements per set
    (a blank line is the empty set)."""
    lines = text.splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    if not lines:
        raise FormatError("empty family file")
    h = _header_fields(lines[0], "family", ("n", "m"))
    n, m = h["n"], h["m"]
    if len(lines) - 1 != m:
        raise FormatError(f"expected {m} set lines, got {len(lines) - 1}")
    sets = []
    for ln in lines[1:]:
        try:
            xs = [int(x) for x in ln.split()]
        except ValueError:
            raise FormatError(f"bad set line {ln!r}") from None
        if any(not 0 <= x < n for x in xs):
            raise FormatError(f"element out of range in {ln!r}")
        sets.append(frozenset(xs))
    return SetFamily(n, tuple(sets))


def format_family(F: SetFamily) -> str:
    lines = [f"family n={F.n} m={len(F.sets)}"]
    for s in F.sets:
        lines.append(" ".join(str(x) for x in sorted(s)))
    return "\n".join(lines) + "\n"


def parse_hyper3(text: str) -> TripartiteHypergraph:
    """`hyper3 n=<n> m=<m>` then m lines `a b c`."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise FormatError("empty hypergraph file")
    h = _header_fields(lines[0], "hyper3", ("n", "m"))
    n, m = h["n"], h["m"]
    if len(lines) - 1 != m:
        raise FormatError(f"expected {m} triple lines, got {len(lines) - 1}")
    triples = set()
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 3:
            raise FormatError(f"bad triple line {ln!r}")
        try:
            a, b, c = (int(x) for x in parts)
        except ValueError:
            raise FormatError(f"bad triple line {ln!r}") from None
        if not all(0 <= x < n for x in (a, b, c)):
            raise FormatError(f"triple out of range in {ln!r}")
        triples.add((a, b, c))
    return TripartiteHypergraph(n, frozenset(triples))


def format_hyper3(H: TripartiteHypergraph) -> str:
    lines = [f"hyper3 n={H.n} m={len(H.triples)}"]
    for t in sorted(H.triples):
        lines.append(f"{t[0]} {t[1]} {t[2]}")
    return "\n".join(lines) + "\n"
