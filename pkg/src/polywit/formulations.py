"""Positive-coefficient polynomial encodings of hard problems.

Each problem gets three pieces: a legend (bijection between structured
variable keys and indices), a polynomial P over the integers whose monomials
enumerate candidate solution certificates, and an assignment map phi sending
an instance to a 0/1 vector.  The instance is a yes-instance exactly when
P(phi(instance)) > 0, and the value never exceeds the monomial count.

Solutions are chopped into theta blocks; variables describe block-local
certificates that the solver oracles can check quickly, and monomials glue
blocks back together.  All block sizes use ceilings.  Distinct certificates
mapping to the same monomial accumulate coefficients.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .algebra import SparsePolynomial, cantor_pair, make_poly, poly_eval
from .errors import FormatError, ParameterError
from . import solvers as sv
from . import splitters as sp

BOT = None  # sentinel end marker for the final path segment


class Legend:
    """Bijection between variable keys and indices [0, s)."""

    def __init__(self, keys: Sequence[tuple]):
        self.keys = tuple(keys)
        self.index = {k: i for i, k in enumerate(self.keys)}
        if len(self.index) != len(self.keys):
            raise ParameterError("legend keys must be distinct")

    def __len__(self) -> int:
        return len(self.keys)

    def __eq__(self, other) -> bool:
        return isinstance(other, Legend) and self.keys == other.keys


@dataclass(frozen=True)
class FormulationOutput:
    problem: str
    legend: Legend
    poly: SparsePolynomial
    theta: int
    delta: int
    s: int
    params: dict = field(default_factory=dict)


@dataclass(frozen=True)
class Assignment:
    values: tuple  # 0/1 entries aligned with the legend

    def __post_init__(self):
        if any(v not in (0, 1) for v in self.values):
            raise ParameterError("assignment entries must be 0 or 1")


def decide(form: FormulationOutput, assignment: Assignment) -> bool:
    return evaluate(form, assignment) > 0


def evaluate(form: FormulationOutput, assignment: Assignment) -> int:
    if len(assignment.values) != form.s:
        raise ParameterError("assignment length must equal the variable count")
    return poly_eval(form.poly, list(assignment.values))


def param_index(s: int, k: int) -> int:
    """Global family index of a parameterized formulation; the gap to the
    next index is filled with dummy variables conceptually, never
    materialized."""
    return cantor_pair(s, k)


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def _build(problem, keys, witnesses, theta, delta, params):
    """Assemble a FormulationOutput from legend keys and witness factor
    lists.

    Every coefficient is 1: witnesses that produce the same monomial
    collapse to a single term, keeping values at 0/1 points below the
    monomial count (and hence below any prime chosen to clear it).
    """
    legend = Legend(keys)
    coeffs: dict = {}
    for factors in witnesses:
        counts: dict = {}
        for key in factors:
            idx = legend.index[key]
            counts[idx] = counts.get(idx, 0) + 1
        coeffs[tuple(sorted(counts.items()))] = 1
    poly = make_poly(len(legend), coeffs, modulus=None, degree_bound=delta)
    return FormulationOutput(problem, legend, poly, theta, delta, len(legend), params)


def _subsets_up_to(universe: Sequence[int], cap: int):
    for r in range(min(cap, len(universe)) + 1):
        yield from itertools.combinations(universe, r)


def _check_theta(theta: int, minimum: int = 2):
    if theta < minimum:
        raise ParameterError(f"theta must be at least {minimum}")


def _compositions(total: int, parts: int, cap: Optional[int] = None):
    """Ordered tuples of nonnegative ints of given length summing to total."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    hi = total if cap is None else min(cap, total)
    for first in range(hi + 1):
        for rest in _compositions(total - first, parts - 1, cap):
            yield (first,) + rest


def _distribute(elems: Sequence[int], blocks: int, cap: int):
    """Ordered tuples of disjoint blocks (as tuples) partitioning elems with
    each block size at most cap."""
    if not elems:
        yield ((),) * blocks
        return
    for sizes in _compositions(len(elems), blocks, cap):
        yield from _placements(tuple(elems), sizes)


def _placements(elems: tuple, sizes: tuple):
    if not sizes:
        yield ()
        return
    for first in itertools.combinations(elems, sizes[0]):
        rest_elems = tuple(x for x in elems if x not in first)
        for rest in _placements(rest_elems, sizes[1:]):
            yield (first,) + rest


# ---------------------------------------------------------------------------
# Hamiltonian Path


def _ham_block_sizes(n: int, theta: int):
    c = _ceil_div(n, theta)
    last = n - (theta - 1) * c
    if last < 1:
        raise ParameterError(
            f"cannot split {n} nodes into {theta} blocks of size {c}"
        )
    return [c] * (theta - 1) + [last]


def _ham_keys(n: int, theta: int):
    sizes = _ham_block_sizes(n, theta)
    c, last = sizes[0], sizes[-1]
    keys = set()
    nodes = range(n)
    for S in itertools.combinations(nodes, c):
        rest = [v for v in nodes if v not in S]
        for u in S:
            for v in rest:
                keys.add(("hamseg", S, u, v))
            if last == c:
                keys.add(("hamseg", S, u, BOT))
    if last != c:
        for S in itertools.combinations(nodes, last):
            rest = [v for v in nodes if v not in S]
            for u in S:
                for v in rest:
                    keys.add(("hamseg", S, u, v))
                keys.add(("hamseg", S, u, BOT))
    return sorted(keys, key=lambda k: (len(k[1]), k[1], k[2], (k[3] is BOT, k[3] or 0)))


def _ordered_partitions(nodes: tuple, sizes: Sequence[int]):
    yield from _placements(nodes, tuple(sizes))


def formulate_hamiltonian_path(n: int, theta: int) -> FormulationOutput:
    """Certificates: an ordered partition into blocks, a start node per
    block, and an optional successor after the final block; each factor
    attests a block-spanning path ending adjacent to the next start."""
    _check_theta(theta)
    sizes = _ham_block_sizes(n, theta)
    keys = _ham_keys(n, theta)

    def witnesses():
        nodes = tuple(range(n))
        for blocks in _ordered_partitions(nodes, sizes):
            for starts in itertools.product(*blocks):
                last_block = blocks[-1]
                tail = [v for v in nodes if v not in last_block] + [BOT]
                for after in tail:
                    chain = list(starts[1:]) + [after]
                    yield [
                        ("hamseg", blocks[i], starts[i], chain[i])
                        for i in range(theta)
                    ]

    return _build(
        "ham-path", keys, witnesses(), theta, theta, {"n": n}
    )


def assign_hamiltonian_path(G: sv.DirectedGraph, theta: int) -> Assignment:
    form_keys = _ham_keys(G.n, theta)
    vals = []
    for _, S, u, v in form_keys:
        vals.append(int(sv.ham_segment(G, S, u, v)))
    return Assignment(tuple(vals))


# ---------------------------------------------------------------------------
# Independent Set, Clique, Vertex Cover


def formulate_independent_set(n: int, t: int, theta: int) -> FormulationOutput:
    """Certificates: t nodes spread over theta blocks of size <= ceil(n/theta);
    each factor attests one pairwise block union is independent."""
    _check_theta(theta)
    if not 0 <= t <= n:
        raise ParameterError("target must satisfy 0 <= t <= n")
    cap = _ceil_div(n, theta)
    keys = [("indep", S) for S in _subsets_up_to(range(n), 2 * cap)]
    delta = theta * (theta - 1) // 2

    def witnesses():
        for U in itertools.combinations(range(n), t):
            for blocks in _distribute(U, theta, cap):
                yield [
                    ("indep", tuple(sorted(blocks[i] + blocks[j])))
                    for i in range(theta)
                    for j in range(i + 1, theta)
                ]

    return _build("indep-set", keys, witnesses(), theta, delta, {"n": n, "t": t})


def assign_independent_set(G: sv.UndirectedGraph, theta: int) -> Assignment:
    cap = _ceil_div(G.n, theta)
    vals = [
        int(sv.is_independent(G, S)) for S in _subsets_up_to(range(G.n), 2 * cap)
    ]
    return Assignment(tuple(vals))


def formulate_clique(n: int, t: int, theta: int) -> FormulationOutput:
    form = formulate_independent_set(n, t, theta)
    return FormulationOutput(
        "clique", form.legend, form.poly, theta, form.delta, form.s, form.params
    )


def assign_clique(G: sv.UndirectedGraph, theta: int) -> Assignment:
    return assign_independent_set(sv.complement(G), theta)


def formulate_vertex_cover(n: int, t: int, theta: int) -> FormulationOutput:
    form = formulate_independent_set(n, n - t, theta)
    params = dict(form.params)
    params["t"] = t
    return FormulationOutput(
        "vertex-cover", form.legend, form.poly, theta, form.delta, form.s, params
    )


def assign_vertex_cover(G: sv.UndirectedGraph, theta: int) -> Assignment:
    return assign_independent_set(G, theta)


# ---------------------------------------------------------------------------
# MAX-k-SAT and k-SAT


def _sat_blocks(n: int, theta: int):
    c = _ceil_div(n, theta)
    return [tuple(range(i * c, min((i + 1) * c, n))) for i in range(theta)]


def _sat_block_sets(theta: int, k: int):
    return list(itertools.combinations(range(theta), k))


def _block_of_var(var: int, n: int, theta: int) -> int:
    return var // _ceil_div(n, theta)


def _pad_blocks(hit: Iterable[int], theta: int, k: int) -> tuple:
    """Smallest k-superset of the hit blocks."""
    hit = set(hit)
    if len(hit) > k:
        raise ParameterError("clause touches more than k blocks")
    for i in range(theta):
        if len(hit) == k:
            break
        hit.add(i)
    return tuple(sorted(hit))


def formulate_max_ksat(n: int, m: int, k: int, t: int, theta: int) -> FormulationOutput:
    """Certificates: a global assignment plus a satisfaction quota per
    k-block-set; each factor attests the projected assignment meets the
    quota on that block set's own clauses."""
    _check_theta(theta)
    if not 1 <= k <= theta:
        raise ParameterError("need 1 <= k <= theta")
    if n < 1 or t < 0:
        raise ParameterError("need n >= 1 and t >= 0")
    blocks = _sat_blocks(n, theta)
    bsets = _sat_block_sets(theta, k)
    keys = []
    for B in bsets:
        width = sum(len(blocks[i]) for i in B)
        for tau in itertools.product((0, 1), repeat=width):
            for r in range(t + 1):
                keys.append(("maxsat", B, tau, r))

    def witnesses():
        for quota in _compositions(t, len(bsets)):
            for mu in itertools.product((0, 1), repeat=n):
                factors = []
                for bi, B in enumerate(bsets):
                    proj = tuple(mu[v] for i in B for v in blocks[i])
                    factors.append(("maxsat", B, proj, quota[bi]))
                yield factors

    delta = math.comb(theta, k)
    return _build(
        "max-ksat", keys, witnesses(), theta, delta,
        {"n": n, "m": m, "k": k, "t": t},
    )


def assign_max_ksat(F: sv.CnfFormula, theta: int, t: int) -> Assignment:
    n = F.nvars
    k = F.width
    blocks = _sat_blocks(n, theta)
    clause_sets: dict = {}
    for ci, clause in enumerate(F.clauses):
        hit = {_block_of_var(abs(lit) - 1, n, theta) for lit in clause}
        B = _pad_blocks(hit, theta, k)
        clause_sets.setdefault(B, []).append(ci)
    vals = []
    for B in _sat_block_sets(theta, k):
        bvars = [v for i in B for v in blocks[i]]
        for tau in itertools.product((0, 1), repeat=len(bvars)):
            tau_map = {v: bool(b) for v, b in zip(bvars, tau)}
            count = sv.sat_count_restricted(
                F, bvars, tau_map, clause_sets.get(B, [])
            )
            for r in range(t + 1):
                vals.append(int(count >= r))
    return Assignment(tuple(vals))


def formulate_ksat(n: int, m: int, k: int, theta: int) -> FormulationOutput:
    form = formulate_max_ksat(n, m, k, m, theta)
    return FormulationOutput(
        "ksat", form.legend, form.poly, theta, form.delta, form.s, form.params
    )


def assign_ksat(F: sv.CnfFormula, theta: int) -> Assignment:
    return assign_max_ksat(F, theta, len(F.clauses))


# ---------------------------------------------------------------------------
# Graph Coloring


def _lex_chunks(L: Sequence[int], cap: int):
    L = sorted(L)
    return [tuple(L[i : i + cap]) for i in range(0, len(L), cap)]


def _large_tuples(universe: Sequence[int], count: int, cap: int):
    """Ordered tuples of pairwise disjoint subsets, each larger than cap."""
    if count == 0:
        yield ()
        return
    universe = tuple(universe)
    for size in range(cap + 1, len(universe) + 1):
        for T in itertools.combinations(universe, size):
            rest = tuple(x for x in universe if x not in T)
            for others in _large_tuples(rest, count - 1, cap):
                yield (T,) + others


def formulate_graph_coloring(n: int, t: int, theta: int) -> FormulationOutput:
    """Color classes larger than one block are certified independent through
    pairwise chunk variables; the rest of the nodes are grouped into theta
    double-size blocks, each given a share of the color budget."""
    _check_theta(theta)
    if not 1 <= t <= n:
        raise ParameterError("need 1 <= t <= n")
    cap = _ceil_div(n, theta)
    nodes = tuple(range(n))
    keys = [
        ("cbud", S, r)
        for S in _subsets_up_to(nodes, 2 * cap)
        for r in range(t + 1)
    ]
    keys += [("cind", S) for S in _subsets_up_to(nodes, 2 * cap)]

    def witnesses():
        for nlarge in range(theta + 1):
            if t - nlarge < 0:
                break
            for larges in _large_tuples(nodes, nlarge, cap):
                mfactors = []
                for T in larges:
                    chunks = _lex_chunks(T, cap)
                    for a, b in itertools.combinations(chunks, 2):
                        mfactors.append(("cind", tuple(sorted(a + b))))
                used = {x for T in larges for x in T}
                rem = tuple(x for x in nodes if x not in used)
                for blocks in _distribute(rem, theta, 2 * cap):
                    for budget in _compositions(t - nlarge, theta):
                        yield mfactors + [
                            ("cbud", blocks[i], budget[i]) for i in range(theta)
                        ]

    delta = 2 * theta * theta + theta
    return _build("coloring", keys, witnesses(), theta, delta, {"n": n, "t": t})


def assign_graph_coloring(G: sv.UndirectedGraph, theta: int, t: int) -> Assignment:
    cap = _ceil_div(G.n, theta)
    nodes = tuple(range(G.n))
    vals = []
    for S in _subsets_up_to(nodes, 2 * cap):
        sub = _induced(G, S)
        for r in range(t + 1):
            vals.append(int(sv.chromatic_at_most(sub, r)))
    for S in _subsets_up_to(nodes, 2 * cap):
        vals.append(int(sv.is_independent(G, S)))
    return Assignment(tuple(vals))


def _induced(G: sv.UndirectedGraph, S: Sequence[int]) -> sv.UndirectedGraph:
    pos = {x: i for i, x in enumerate(S)}
    edges = [
        (pos[u], pos[v]) for u, v in G.edges if u in pos and v in pos
    ]
    return sv.ugraph(len(S), edges)


# ---------------------------------------------------------------------------
# Set Cover


def formulate_set_cover(n: int, m: int, t: int, theta: int) -> FormulationOutput:
    """Blocks of the universe are either covered within a budget or certified
    as chunks of one large set via membership variables."""
    _check_theta(theta)
    if n < 1 or m < 1 or t < 0:
        raise ParameterError("need n >= 1, m >= 1, t >= 0")
    cap = _ceil_div(n, theta)
    nodes = tuple(range(n))
    keys = [
        ("cover", S, r)
        for S in _subsets_up_to(nodes, 2 * cap)
        for r in range(t + 1)
    ]
    keys += [
        ("coverin", S, i)
        for S in _subsets_up_to(nodes, 2 * cap)
        for i in range(m)
    ]

    def witnesses():
        for nlarge in range(theta + 1):
            if t - nlarge < 0:
                break
            for qs in itertools.permutations(range(m), nlarge):
                for larges in _large_tuples(nodes, nlarge, cap):
                    mfactors = []
                    for T, q in zip(larges, qs):
                        for chunk in _lex_chunks(T, cap):
                            mfactors.append(("coverin", chunk, q))
                    used = {x for T in larges for x in T}
                    rem = tuple(x for x in nodes if x not in used)
                    for blocks in _distribute(rem, theta, 2 * cap):
                        for budget in _compositions(t - nlarge, theta):
                            yield mfactors + [
                                ("cover", blocks[i], budget[i])
                                for i in range(theta)
                            ]

    delta = (theta + 1) * theta
    return _build(
        "set-cover", keys, witnesses(), theta, delta, {"n": n, "m": m, "t": t}
    )


def assign_set_cover(F: sv.SetFamily, theta: int, t: int) -> Assignment:
    cap = _ceil_div(F.n, theta)
    nodes = tuple(range(F.n))
    vals = []
    for S in _subsets_up_to(nodes, 2 * cap):
        for r in range(t + 1):
            vals.append(int(sv.set_cover_at_most(F, S, r)))
    for S in _subsets_up_to(nodes, 2 * cap):
        Sset = frozenset(S)
        for i in range(len(F.sets)):
            vals.append(int(Sset <= F.sets[i]))
    return Assignment(tuple(vals))


# ---------------------------------------------------------------------------
# 3d-Matching


def formulate_3d_matching(n: int, t: int, theta: int) -> FormulationOutput:
    """Certificates: a t-node slice of each part distributed over theta
    equal-size triples; each factor attests a perfect matching on its
    triple."""
    _check_theta(theta)
    if not 0 <= t <= n:
        raise ParameterError("need 0 <= t <= n")
    cap = _ceil_div(n, theta)
    part = tuple(range(n))
    keys = []
    for size in range(min(cap, n) + 1):
        for A in itertools.combinations(part, size):
            for B in itertools.combinations(part, size):
                for C in itertools.combinations(part, size):
                    keys.append(("match3", A, B, C))

    def witnesses():
        for U_A in itertools.combinations(part, t):
            for As in _distribute(U_A, theta, cap):
                sizes = tuple(len(a) for a in As)
                for Bs in _sized_blocks(part, sizes):
                    for Cs in _sized_blocks(part, sizes):
                        yield [
                            ("match3", As[i], Bs[i], Cs[i])
                            for i in range(theta)
                        ]

    return _build("3d-matching", keys, witnesses(), theta, theta, {"n": n, "t": t})


def _sized_blocks(universe: tuple, sizes: tuple):
    """Ordered tuples of disjoint subsets with the given sizes."""
    yield from _placements_loose(universe, sizes)


def _placements_loose(avail: tuple, sizes: tuple):
    if not sizes:
        yield ()
        return
    for first in itertools.combinations(avail, sizes[0]):
        rest = tuple(x for x in avail if x not in first)
        for others in _placements_loose(rest, sizes[1:]):
            yield (first,) + others


def assign_3d_matching(H: sv.TripartiteHypergraph, theta: int) -> Assignment:
    cap = _ceil_div(H.n, theta)
    part = tuple(range(H.n))
    vals = []
    for size in range(min(cap, H.n) + 1):
        for A in itertools.combinations(part, size):
            for B in itertools.combinations(part, size):
                for C in itertools.combinations(part, size):
                    vals.append(int(sv.matching3d_max(H, A, B, C) == size))
    return Assignment(tuple(vals))


# ---------------------------------------------------------------------------
# k-Vertex Cover


def formulate_k_vertex_cover(n: int, k: int, theta: int) -> FormulationOutput:
    """Certificates: candidate covers of size <= k, factored into traces on
    pairs of fixed node blocks."""
    _check_theta(theta)
    if k < 0:
        raise ParameterError("k must be nonnegative")
    blocks = _sat_blocks(n, theta)
    keys = []
    for i in range(theta):
        for j in range(i + 1, theta):
            for A in _subsets_up_to(blocks[i], len(blocks[i])):
                for B in _subsets_up_to(blocks[j], len(blocks[j])):
                    keys.append(("vc", i, j, A, B))

    def witnesses():
        for size in range(min(k, n) + 1):
            for S in itertools.combinations(range(n), size):
                Sset = set(S)
                yield [
                    (
                        "vc", i, j,
                        tuple(x for x in blocks[i] if x in Sset),
                        tuple(x for x in blocks[j] if x in Sset),
                    )
                    for i in range(theta)
                    for j in range(i + 1, theta)
                ]

    return _build(
        "k-vertex-cover", keys, witnesses(), theta, theta * theta,
        {"n": n, "k": k},
    )


def assign_k_vertex_cover(G: sv.UndirectedGraph, theta: int) -> Assignment:
    blocks = _sat_blocks(G.n, theta)
    vals = []
    for i in range(theta):
        for j in range(i + 1, theta):
            span = set(blocks[i]) | set(blocks[j])
            span_edges = [
                e for e in G.edges if e[0] in span and e[1] in span
            ]
            for A in _subsets_up_to(blocks[i], len(blocks[i])):
                for B in _subsets_up_to(blocks[j], len(blocks[j])):
                    cover = set(A) | set(B)
                    ok = all(u in cover or v in cover for u, v in span_edges)
                    vals.append(int(ok))
    return Assignment(tuple(vals))


# ---------------------------------------------------------------------------
# k-Set Splitting


def formulate_k_set_splitting(n: int, m: int, k: int, theta: int) -> FormulationOutput:
    """Certificates: a 2-partition of the universe plus theta block-local
    splitter pairs, each paired with a batch of set indices it splits;
    batches are disjoint and total exactly k."""
    _check_theta(theta)
    if k < 0 or n < 1 or m < 0:
        raise ParameterError("need n >= 1, m >= 0, k >= 0")
    cap = _ceil_div(k, theta)
    nodes = tuple(range(n))
    keys = []
    for A in _subsets_up_to(nodes, cap):
        rest = tuple(x for x in nodes if x not in A)
        for B in _subsets_up_to(rest, cap):
            for L in _subsets_up_to(range(m), cap):
                keys.append(("split", A, B, L))

    def witnesses():
        for bits in itertools.product((0, 1), repeat=n):
            A = tuple(x for x in nodes if bits[x] == 0)
            B = tuple(x for x in nodes if bits[x] == 1)
            subA = list(_subsets_up_to(A, cap))
            subB = list(_subsets_up_to(B, cap))
            for Ls in _disjoint_index_tuples(m, theta, cap, k):
                for As in itertools.product(subA, repeat=theta):
                    for Bs in itertools.product(subB, repeat=theta):
                        yield [
                            ("split", As[i], Bs[i], Ls[i])
                            for i in range(theta)
                        ]

    return _build(
        "k-set-splitting", keys, witnesses(), theta, theta,
        {"n": n, "m": m, "k": k},
    )


def _disjoint_index_tuples(m: int, blocks: int, cap: int, total: int):
    """Ordered tuples of disjoint subsets of [m] with sizes <= cap summing
    to total."""
    for sizes in _compositions(total, blocks, cap):
        yield from _placements_loose(tuple(range(m)), sizes)


def assign_k_set_splitting(F: sv.SetFamily, theta: int, k: int) -> Assignment:
    cap = _ceil_div(k, theta)
    nodes = tuple(range(F.n))
    vals = []
    for A in _subsets_up_to(nodes, cap):
        rest = tuple(x for x in nodes if x not in A)
        for B in _subsets_up_to(rest, cap):
            for L in _subsets_up_to(range(len(F.sets)), cap):
                ok = all(sv.split_check(A, B, F.sets[i]) for i in L)
                vals.append(int(ok))
    return Assignment(tuple(vals))


# ---------------------------------------------------------------------------
# k-Steiner Tree


def _connected_patterns(m: int, usize: int):
    """Tuples (A_1..A_m) of subsets of range(usize) with union everything,
    whose subset graph is connected.  Cached by shape."""
    key = (m, usize)
    if key not in _connected_patterns.cache:
        out = []
        universe = tuple(range(usize))
        full = frozenset(universe)
        for tup in itertools.product(
            list(_subsets_up_to(universe, usize)), repeat=m
        ):
            if frozenset(x for s in tup for x in s) != full:
                continue
            if sv.subset_graph(tup).is_connected():
                out.append(tup)
        _connected_patterns.cache[key] = out
    return _connected_patterns.cache[key]


_connected_patterns.cache = {}


def _steiner_keys(n: int, terminals: tuple, t: int, theta: int):
    cap = _ceil_div(3 * len(terminals), theta)
    keys = []
    for Sp in _subsets_up_to(terminals, cap):
        for A in _subsets_up_to(range(n), theta - 1):
            for ell in range(t + 1):
                keys.append(("steiner", Sp, A, ell))
    keys += [("budget", L) for L in range(t + 1)]
    return keys


def formulate_k_steiner_tree(G, terminals: Iterable, t: int, theta: int) -> FormulationOutput:
    """Certificates: <= theta overlapping terminal batches, connector sets
    gluing into a connected subset graph, and a weight split.  Weight splits
    beyond t are omitted: their budget factor is identically zero."""
    _check_theta(theta)
    terminals = tuple(sorted(set(terminals)))
    if not terminals:
        raise ParameterError("need at least one terminal")
    if t < 0:
        raise ParameterError("weight target must be nonnegative")
    n = G.n
    cap = _ceil_div(3 * len(terminals), theta)
    keys = _steiner_keys(n, terminals, t, theta)

    def witnesses():
        for m in range(1, theta + 1):
            covers = [
                tup
                for tup in itertools.product(
                    list(_subsets_up_to(terminals, cap)), repeat=m
                )
                if frozenset(x for s in tup for x in s) == frozenset(terminals)
            ]
            atuples = []
            for usize in range(theta):
                for U in itertools.combinations(range(n), usize):
                    for pattern in _connected_patterns(m, usize):
                        atuples.append(
                            tuple(
                                tuple(U[p] for p in pat) for pat in pattern
                            )
                        )
            for total in range(t + 1):
                budget_key = ("budget", total)
                for ells in _compositions(total, m):
                    for Ss in covers:
                        for As in atuples:
                            yield [budget_key] + [
                                ("steiner", Ss[i], As[i], ells[i])
                                for i in range(m)
                            ]

    return _build(
        "k-steiner-tree", keys, witnesses(), theta, theta + 1,
        {"n": n, "k": len(terminals), "t": t, "terminals": terminals},
    )


def assign_k_steiner_tree(G: sv.UndirectedGraph, terminals: Iterable, t: int, theta: int) -> Assignment:
    terminals = tuple(sorted(set(terminals)))
    vals = []
    for key in _steiner_keys(G.n, terminals, t, theta):
        if key[0] == "steiner":
            _, Sp, A, ell = key
            group = set(Sp) | set(A)
            if not group:
                vals.append(1)
                continue
            w = sv.steiner_tree_min(G, group)
            vals.append(int(w is not None and w <= ell))
        else:
            vals.append(int(key[1] <= t))
    return Assignment(tuple(vals))


# ---------------------------------------------------------------------------
# k-Internal / k-Leaf Spanning Tree


def _span_keys(n: int, theta: int):
    cap = _ceil_div(3 * n, theta)
    keys = []
    for S in _subsets_up_to(range(n), cap):
        for A in _subsets_up_to(S, theta - 1):
            for kp in range(len(S) + 1):
                keys.append(("span", S, A, kp))
    return keys


def _span_witnesses(n: int, k: int, theta: int, extra):
    """Shared enumeration: covers whose subset graph is a tree, plus budget
    tuples with sum >= k + extra(m)."""
    cap = _ceil_div(3 * n, theta)
    nodes = tuple(range(n))
    all_sets = [
        S for S in _subsets_up_to(nodes, cap) if len(S) > 1
    ]
    full = frozenset(nodes)
    for m in range(1, theta + 1):
        for tup in itertools.product(all_sets, repeat=m):
            if frozenset(x for s in tup for x in s) != full:
                continue
            if not sv.subset_graph(tup).is_tree():
                continue
            shares = []
            for i in range(m):
                others = set()
                for j in range(m):
                    if j != i:
                        others |= set(tup[i]) & set(tup[j])
                shares.append(tuple(sorted(others)))
            need = k + extra(m)
            for ks in itertools.product(*(range(len(s) + 1) for s in tup)):
                if sum(ks) < need:
                    continue
                yield [
                    ("span", tup[i], shares[i], ks[i]) for i in range(m)
                ]


def formulate_k_internal_spanning_tree(n: int, k: int, theta: int) -> FormulationOutput:
    """Certificates: a cover of V by small node sets gluing into a tree,
    with per-set internal-node quotas; shared nodes are double counted once
    per gluing edge, hence the k + (m-1) total."""
    _check_theta(theta, 3)
    if k < 0 or n < 1:
        raise ParameterError("need n >= 1 and k >= 0")
    keys = _span_keys(n, theta)
    wit = _span_witnesses(n, k, theta, lambda m: m - 1)
    return _build(
        "k-internal-spanning-tree", keys, wit, theta, theta, {"n": n, "k": k}
    )


def formulate_k_leaf_spanning_tree(n: int, k: int, theta: int) -> FormulationOutput:
    """Same cover structure as the internal variant with plain quota sum
    >= k; shared nodes are forced internal by attaching dummy leaves."""
    _check_theta(theta, 3)
    if k < 0 or n < 1:
        raise ParameterError("need n >= 1 and k >= 0")
    keys = _span_keys(n, theta)
    wit = _span_witnesses(n, k, theta, lambda m: 0)
    return _build(
        "k-leaf-spanning-tree", keys, wit, theta, theta, {"n": n, "k": k}
    )


def _leafed_subgraph(G: sv.UndirectedGraph, S: tuple, A: tuple):
    """G[S] with a fresh leaf pinned to every node of A."""
    pos = {x: i for i, x in enumerate(S)}
    edges = [(pos[u], pos[v]) for u, v in G.edges if u in pos and v in pos]
    nxt = len(S)
    for a in A:
        edges.append((pos[a], nxt))
        nxt += 1
    return sv.ugraph(nxt, edges)


def _assign_span(G: sv.UndirectedGraph, theta: int, leaf_mode: bool) -> Assignment:
    vals = []
    for _, S, A, kp in _span_keys(G.n, theta):
        if len(S) == 0:
            # empty graph spans itself; only kp = 0 exists here
            vals.append(1)
            continue
        H = _leafed_subgraph(G, S, A)
        if not sv.is_connected(H):
            vals.append(0)
            continue
        if leaf_mode:
            vals.append(int(sv.spanning_tree_leaf_max(H) >= kp + len(A)))
        else:
            vals.append(int(sv.spanning_tree_internal_max(H) >= kp))
    return Assignment(tuple(vals))


def assign_k_internal_spanning_tree(G: sv.UndirectedGraph, theta: int) -> Assignment:
    return _assign_span(G, theta, leaf_mode=False)


def assign_k_leaf_spanning_tree(G: sv.UndirectedGraph, theta: int) -> Assignment:
    return _assign_span(G, theta, leaf_mode=True)


# ---------------------------------------------------------------------------
# k-Nonblocker


def formulate_k_nonblocker(n: int, k: int, theta: int) -> FormulationOutput:
    """Certificates: V partitioned into theta dominator blocks and theta^2
    dominated blocks with at least k dominated nodes in total."""
    _check_theta(theta)
    if k < 0 or n < 1:
        raise ParameterError("need n >= 1 and k >= 0")
    cap = _ceil_div(n, theta)
    nodes = tuple(range(n))
    keys = []
    for N in _subsets_up_to(nodes, cap):
        for D in _subsets_up_to(nodes, cap):
            keys.append(("nonblk", N, D))

    nblocks = theta * theta + theta

    def witnesses():
        for labeling in itertools.product(range(nblocks), repeat=n):
            counts = [0] * nblocks
            ok = True
            nsize = 0
            for lab in labeling:
                counts[lab] += 1
                if counts[lab] > cap:
                    ok = False
                    break
                if lab < theta * theta:
                    nsize += 1
            if not ok or nsize < k:
                continue
            grouped: dict = {}
            for x, lab in zip(nodes, labeling):
                grouped.setdefault(lab, []).append(x)
            factors = []
            for i in range(theta):
                D = tuple(grouped.get(theta * theta + i, ()))
                for j in range(theta):
                    N = tuple(grouped.get(i * theta + j, ()))
                    factors.append(("nonblk", N, D))
            yield factors

    return _build(
        "k-nonblocker", keys, witnesses(), theta, theta * theta, {"n": n, "k": k}
    )


def assign_k_nonblocker(G: sv.UndirectedGraph, theta: int) -> Assignment:
    cap = _ceil_div(G.n, theta)
    nodes = tuple(range(G.n))
    vals = []
    for N in _subsets_up_to(nodes, cap):
        for D in _subsets_up_to(nodes, cap):
            vals.append(int(sv.dominated_check(G, N, D)))
    return Assignment(tuple(vals))


# ---------------------------------------------------------------------------
# k-Path


def kpath_splitter_family(n: int, k: int, c: int) -> sp.SplitterFamily:
    if k == 1:
        # any single coloring splits singletons; composition needs k >= 2
        member = sp.Coloring(n, c, (0,) * n)
        return sp.SplitterFamily(n, 1, c, (member,), sp.KIND_INJECTIVE)
    return sp.compose_splitter(n, k, c)


def _kpath_keys(n: int, k: int, theta: int, family: sp.SplitterFamily):
    """Structurally possible path-segment keys: endpoint colors must lie in
    the color set, distinct unless the set is a singleton."""
    cap = _ceil_div(k, theta)
    R = family.ell
    keys = []
    for fi, member in enumerate(family.members):
        cls: dict = {}
        for x, col in enumerate(member.table):
            cls.setdefault(col, []).append(x)
        for size in range(1, cap + 1):
            for C in itertools.combinations(range(R), size):
                if size == 1:
                    for u in cls.get(C[0], ()):
                        keys.append(("kpath", fi, C, u, u))
                else:
                    for a in C:
                        for b in C:
                            if a == b:
                                continue
                            for u in cls.get(a, ()):
                                for v in cls.get(b, ()):
                                    keys.append(("kpath", fi, C, u, v))
    for u in range(n):
        for v in range(n):
            if u != v:
                keys.append(("edge", u, v))
    return keys


def formulate_k_path(G, k: int, theta: int, c_splitter: Optional[int] = None) -> FormulationOutput:
    """Certificates: per splitter member, a split of k colors into theta
    batches and a color-exact path segment per nonempty batch, chained by
    edge variables."""
    _check_theta(theta)
    if k < 1:
        raise ParameterError("k must be positive")
    n = G.n
    if k > n:
        raise ParameterError("k must not exceed the node count")
    c = theta if c_splitter is None else c_splitter
    family = kpath_splitter_family(n, k, c)
    R = family.ell
    cap = _ceil_div(k, theta)
    keys = _kpath_keys(n, k, theta, family)

    # color-set assignments shared by all members
    assignments = []
    for sizes in _compositions(k, theta, cap):
        for csets in _colorsets(tuple(range(R)), sizes):
            assignments.append(csets)

    def witnesses():
        for fi, member in enumerate(family.members):
            cls: dict = {}
            for x, col in enumerate(member.table):
                cls.setdefault(col, []).append(x)
            for csets in assignments:
                active = [C for C in csets if C]
                pair_lists = []
                feasible = True
                for C in active:
                    pairs = []
                    if len(C) == 1:
                        pairs = [(u, u) for u in cls.get(C[0], ())]
                    else:
                        for a in C:
                            for b in C:
                                if a == b:
                                    continue
                                for u in cls.get(a, ()):
                                    for v in cls.get(b, ()):
                                        pairs.append((u, v))
                    if not pairs:
                        feasible = False
                        break
                    pair_lists.append(pairs)
                if not feasible:
                    continue
                for chosen in itertools.product(*pair_lists):
                    factors = [
                        ("kpath", fi, active[i], chosen[i][0], chosen[i][1])
                        for i in range(len(active))
                    ]
                    for i in range(len(active) - 1):
                        factors.append(("edge", chosen[i][1], chosen[i + 1][0]))
                    yield factors

    return _build(
        "k-path", keys, witnesses(), theta, 2 * theta - 1,
        {"n": n, "k": k, "c": c},
    )


def _colorsets(colors: tuple, sizes: tuple):
    """Ordered tuples of disjoint color sets with the given sizes."""
    if not sizes:
        yield ()
        return
    for first in itertools.combinations(colors, sizes[0]):
        rest = tuple(x for x in colors if x not in first)
        for others in _colorsets(rest, sizes[1:]):
            yield (first,) + others


def assign_k_path(G, k: int, theta: int, c_splitter: Optional[int] = None) -> Assignment:
    c = theta if c_splitter is None else c_splitter
    family = kpath_splitter_family(G.n, k, c)
    vals = []
    for key in _kpath_keys(G.n, k, theta, family):
        if key[0] == "kpath":
            _, fi, C, u, v = key
            f = family.members[fi].table
            vals.append(int(sv.colorful_path_exact(G, f, C, u, v)))
        else:
            vals.append(int(sv.has_edge(G, key[1], key[2])))
    return Assignment(tuple(vals))


# ---------------------------------------------------------------------------
# bundle and assignment files


def _key_to_text(key: tuple) -> str:
    def fmt(x):
        if x is BOT:
            return "bot"
        if isinstance(x, tuple):
            return "{" + ",".join(str(v) for v in x) + "}"
        return str(x)

    return " ".join([key[0]] + [fmt(x) for x in key[1:]])


def format_legend(form: FormulationOutput) -> str:
    lines = [f"{i} {_key_to_text(k)}" for i, k in enumerate(form.legend.keys)]
    return "\n".join(lines) + "\n"


def format_meta(form: FormulationOutput) -> str:
    p = form.params

    def get(name):
        v = p.get(name)
        return "-" if v is None else str(v)

    extra = ""
    if "m" in p:
        extra += f" m={p['m']}"
    if "terminals" in p:
        extra += " terminals=" + ",".join(str(x) for x in p["terminals"])
    if "c" in p:
        extra += f" c={p['c']}"
    return (
        f"problem={form.problem} n={get('n')} k={get('k')} t={get('t')}"
        f" theta={form.theta} delta={form.delta} s={form.s}{extra}\n"
    )


def parse_meta(text: str) -> dict:
    line = text.strip()
    fields = {}
    for part in line.split():
        if "=" not in part:
            raise FormatError(f"bad meta field {part!r}")
        name, val = part.split("=", 1)
        fields[name] = val
    if "problem" not in fields or "theta" not in fields:
        raise FormatError("meta must name problem and theta")
    out = {"problem": fields["problem"]}
    for name in ("n", "k", "t", "theta", "delta", "s", "m", "c"):
        if name in fields and fields[name] != "-":
            try:
                out[name] = int(fields[name])
            except ValueError:
                raise FormatError(f"bad meta value for {name}") from None
    if "terminals" in fields:
        try:
            out["terminals"] = tuple(
                int(x) for x in fields["terminals"].split(",") if x != ""
            )
        except ValueError:
            raise FormatError("bad terminals list") from None
    return out


def format_assignment(assignment: Assignment) -> str:
    bits = " ".join(str(v) for v in assignment.values)
    return f"assign s={len(assignment.values)}\n{bits}\n"


def parse_assignment(text: str) -> Assignment:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("assign "):
        raise FormatError("expected 'assign s=<s>' header")
    parts = lines[0].split()
    if len(parts) != 2 or not parts[1].startswith("s="):
        raise FormatError(f"bad assignment header {lines[0]!r}")
    try:
        s = int(parts[1][2:])
    except ValueError:
        raise FormatError(f"bad assignment header {lines[0]!r}") from None
    bits = []
    for ln in lines[1:]:
        for tok in ln.split():
            if tok not in ("0", "1"):
                raise FormatError(f"bad assignment bit {tok!r}")
            bits.append(int(tok))
    if len(bits) != s:
        raise FormatError(f"expected {s} bits, got {len(bits)}")
    return Assignment(tuple(bits))
