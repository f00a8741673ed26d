"""Splitter families over [n]: colorings such that every k-subset is either
evenly split or injectively colored by some member.

Four constructions: a Reed-Solomon-style code (injective, prime range), cut
sequences (even split), a greedy cover drawn from a k-wise independent family
(injective, range c*k), and a three-level composition that keeps the range
linear in k.  Colors are 0-based throughout.  Verification enumerates all
k-subsets exhaustively and reports the lexicographically first failure.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import _kernels
from .algebra import next_prime_at_least
from .errors import FormatError, ParameterError

KIND_EVEN = "even"
KIND_INJECTIVE = "injective"

_VERIFY_SUBSET_CAP = 10**7
_GREEDY_SUBSET_CAP = 10**6
_KWISE_CAP = 10**7
_INTERVAL_CAP = 10**7
_CODE_N_CAP = 10**6
_CODE_K_CAP = 12


@dataclass(frozen=True)
class Coloring:
    n: int
    ell: int
    table: tuple

    def __post_init__(self):
        if any(not 0 <= v < self.ell for v in self.table):
            raise ParameterError("color out of range")
        if len(self.table) != self.n:
            raise ParameterError("table length must equal the domain size")


@dataclass(frozen=True)
class SplitterFamily:
    n: int
    k: int
    ell: int
    members: tuple  # of Coloring, all sharing (n, ell)
    kind: str

    def __post_init__(self):
        if self.kind not in (KIND_EVEN, KIND_INJECTIVE):
            raise ParameterError(f"unknown kind {self.kind!r}")
        if not self.members:
            raise ParameterError("family must have at least one member")
        if any(c.n != self.n or c.ell != self.ell for c in self.members):
            raise ParameterError("members must share domain and range")


@dataclass(frozen=True)
class KWiseFamily:
    n: int
    k: int
    ell: int
    q: int
    members: tuple  # of Coloring with range ell, one per coefficient tuple


@dataclass(frozen=True)
class SplitterCheck:
    ok: bool
    witness: Optional[tuple] = None


def members_array(members: Sequence[Coloring]) -> np.ndarray:
    return np.array([c.table for c in members], dtype=np.int64)


# ---------------------------------------------------------------------------
# code-based construction


def _digit_count(n: int, q: int) -> int:
    d = 1
    while q**d < n:
        d += 1
    return d


def code_alphabet(n: int, k: int):
    """(q, d): prime alphabet and digit count for the code splitter.

    q must exceed the number of pairwise collision points, (d-1)*k^2/2, so we
    ask for q >= max(k^2, ceil(d*k^2/2 + 1)) and grow d until q^d covers n.
    """
    d = 1
    while True:
        q = next_prime_at_least(max(k * k, (d * k * k + 3) // 2))
        need = _digit_count(n, q)
        if need <= d:
            return q, d
        d = need


def build_code_splitter(n: int, k: int) -> SplitterFamily:
    """One member per field point y: x maps to its base-q digit polynomial
    evaluated at y.  Any two distinct x agree on fewer than d coordinates, so
    any k codewords are collision-free somewhere."""
    if k < 2:
        raise ParameterError("code splitter needs k >= 2")
    if n < 1 or n > _CODE_N_CAP or k > _CODE_K_CAP:
        raise ParameterError("code splitter guard: n <= 10^6, k <= 12")
    q, d = code_alphabet(n, k)
    digits = []
    for x in range(n):
        row = []
        t = x
        for _ in range(d):
            row.append(t % q)
            t //= q
        digits.append(row)
    members = []
    for y in range(q):
        powers = [pow(y, i, q) for i in range(d)]
        table = tuple(
            sum(digits[x][i] * powers[i] for i in range(d)) % q for x in range(n)
        )
        members.append(Coloring(n, q, table))
    return SplitterFamily(n, k, q, tuple(members), KIND_INJECTIVE)


# ---------------------------------------------------------------------------
# interval construction


def build_interval_splitter(n: int, k: int, ell: int) -> SplitterFamily:
    """One member per increasing cut sequence 0 = i_0 < ... < i_ell = n;
    point x gets color t when i_t <= x < i_{t+1}.  The member whose cuts sit
    at the k/ell-quantiles of a k-subset splits it evenly."""
    if not 1 <= ell <= k <= n:
        raise ParameterError("interval splitter needs 1 <= ell <= k <= n")
    if math.comb(n, ell - 1) > _INTERVAL_CAP:
        raise ParameterError("interval splitter guard: C(n, ell-1) <= 10^7")
    members = []
    for cuts in itertools.combinations(range(1, n), ell - 1):
        bounds = (0,) + cuts + (n,)
        table = []
        for t in range(ell):
            table.extend([t] * (bounds[t + 1] - bounds[t]))
        members.append(Coloring(n, ell, tuple(table)))
    return SplitterFamily(n, k, ell, tuple(members), KIND_EVEN)


# ---------------------------------------------------------------------------
# k-wise independent family


def build_kwise_family(n: int, k: int, ell: int) -> KWiseFamily:
    """All degree-(k-1) polynomials over F_q restricted to 0..n-1, values
    reduced mod ell; q is the least prime >= max(n, ell)."""
    if n < 1 or k < 1 or ell < 1:
        raise ParameterError("k-wise family needs positive parameters")
    q = next_prime_at_least(max(n, ell))
    if q**k > _KWISE_CAP:
        raise ParameterError("k-wise family guard: q^k <= 10^7")
    # vandermonde[x][j] = x^j mod q
    vand = [[pow(x, j, q) for j in range(k)] for x in range(n)]
    members = []
    for coeffs in itertools.product(range(q), repeat=k):
        table = tuple(
            sum(c * v for c, v in zip(coeffs, vand[x])) % q % ell
            for x in range(n)
        )
        members.append(Coloring(n, ell, table))
    return KWiseFamily(n, k, ell, q, tuple(members))


# ---------------------------------------------------------------------------
# greedy cover


def build_greedy_splitter(n: int, k: int, c: int) -> SplitterFamily:
    """Repeatedly pick the k-wise member injective on the most uncovered
    k-subsets (lowest index on ties).  Averaging guarantees each round covers
    an e^{-k/c} fraction of the remainder; that floor is asserted."""
    if n < 1 or k < 1 or c < 1:
        raise ParameterError("greedy splitter needs positive parameters")
    if k > n:
        raise ParameterError("greedy splitter needs k <= n")
    if math.comb(n, k) > _GREEDY_SUBSET_CAP:
        raise ParameterError("greedy splitter guard: C(n,k) <= 10^6")
    pool = build_kwise_family(n, k, c * k)
    arr = members_array(pool.members)
    subs = np.array(list(itertools.combinations(range(n), k)), dtype=np.int64)
    alive = np.ones(len(subs), dtype=bool)
    chosen = []
    fraction = math.exp(-k / c)
    while alive.any():
        remaining = int(alive.sum())
        counts = _kernels.greedy_counts(arr, subs, alive)
        best = int(np.argmax(counts))
        covered = int(counts[best])
        assert covered >= math.ceil(fraction * remaining), (
            "greedy round covered too little; averaging bound violated"
        )
        chosen.append(pool.members[best])
        row = arr[best]
        for t in np.nonzero(alive)[0]:
            if _kernels.injective_on(row, subs[t]):
                alive[t] = False
    return SplitterFamily(n, k, c * k, tuple(chosen), KIND_INJECTIVE)


def greedy_size_bound(n: int, k: int, c: int) -> int:
    return math.ceil(math.exp(k / c) * k * math.log(n)) + 1


# ---------------------------------------------------------------------------
# composition


def compose_splitter(n: int, k: int, c: int) -> SplitterFamily:
    """Three-level splitter with range linear in k: an injective code map
    into [q], an even split of [q] into L = ceil(log2 k) parts, and one
    greedy splitter per part.  Member for (a, b, h_0..h_{L-1}) sends x to
    R*j + h_j(a(x)) where j = b(a(x)) and R is the greedy range."""
    if k < 2:
        raise ParameterError("composition needs k >= 2")
    A = build_code_splitter(n, k)
    q = A.ell
    L = max(1, math.ceil(math.log2(k)))
    B = build_interval_splitter(q, k, L)
    part = -(-k // L)
    C = build_greedy_splitter(q, part, c)
    R = C.ell
    members = []
    for a, b, hs in itertools.product(
        A.members, B.members, itertools.product(C.members, repeat=L)
    ):
        table = tuple(
            R * b.table[a.table[x]] + hs[b.table[a.table[x]]].table[a.table[x]]
            for x in range(n)
        )
        members.append(Coloring(n, R * L, table))
    return SplitterFamily(n, k, R * L, tuple(members), KIND_INJECTIVE)


# ---------------------------------------------------------------------------
# verification


def verify_splitter(H: SplitterFamily, mode: str) -> SplitterCheck:
    """Exhaustive check over all k-subsets; the witness is the
    lexicographically first subset no member handles."""
    if mode not in (KIND_EVEN, KIND_INJECTIVE):
        raise ParameterError(f"unknown mode {mode!r}")
    if math.comb(H.n, H.k) > _VERIFY_SUBSET_CAP:
        raise ParameterError("verification guard: C(n,k) <= 10^7")
    if H.k > H.n:
        raise ParameterError("verification needs k <= n")
    arr = members_array(H.members)
    bad = _kernels.verify_family(arr, H.k, H.ell, mode == KIND_EVEN)
    if bad is None:
        return SplitterCheck(True)
    return SplitterCheck(False, tuple(int(x) for x in bad))


# ---------------------------------------------------------------------------
# file format


def format_splitter(H: SplitterFamily) -> str:
    lines = [
        f"splitter n={H.n} k={H.k} range={H.ell}"
        f" kind={H.kind} count={len(H.members)}"
    ]
    for c in H.members:
        lines.append(" ".join(str(v) for v in c.table))
    return "\n".join(lines) + "\n"


def parse_splitter(text: str) -> SplitterFamily:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise FormatError("empty splitter file")
    parts = lines[0].split()
    if not parts or parts[0] != "splitter":
        raise FormatError(f"expected 'splitter' header, got {lines[0]!r}")
    fields = {}
    for p in parts[1:]:
        if "=" not in p:
            raise FormatError(f"bad header field {p!r}")
        key, val = p.split("=", 1)
        fields[key] = val
    try:
        n = int(fields["n"])
        k = int(fields["k"])
        ell = int(fields["range"])
        kind = fields["kind"]
        count = int(fields["count"])
    except (KeyError, ValueError):
        raise FormatError(f"bad splitter header {lines[0]!r}") from None
    if kind not in (KIND_EVEN, KIND_INJECTIVE):
        raise FormatError(f"unknown kind {kind!r}")
    if len(lines) - 1 != count:
        raise FormatError(f"expected {count} members, got {len(lines) - 1}")
    members = []
    for ln in lines[1:]:
        try:
            vals = tuple(int(x) for x in ln.split())
        except ValueError:
            raise FormatError(f"bad member line {ln!r}") from None
        if len(vals) != n:
            raise FormatError(f"member line has {len(vals)} colors, wanted {n}")
        if any(not 0 <= v < ell for v in vals):
            raise FormatError(f"color out of range in {ln!r}")
        members.append(Coloring(n, ell, vals))
    try:
        return SplitterFamily(n, k, ell, tuple(members), kind)
    except ParameterError as exc:
        raise FormatError(str(exc)) from None
