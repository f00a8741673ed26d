"""Splitter constructions against exhaustive and independent checks."""

import itertools
import math
import random

import pytest

from polywit.errors import FormatError, ParameterError
from polywit import splitters as sp


def least_prime_geq(x):
    def prime(v):
        if v < 2:
            return False
        f = 2
        while f * f <= v:
            if v % f == 0:
                return False
            f += 1
        return True

    while not prime(x):
        x += 1
    return x


def brute_verify(H, mode):
    """Second verifier: pure-Python counting over bitmask-encoded subsets,
    scanning k-subsets in lex order."""
    lo, hi = H.k // H.ell, -(-H.k // H.ell)
    for subset in itertools.combinations(range(H.n), H.k):
        covered = False
        for member in H.members:
            counts = {}
            for x in subset:
                counts[member.table[x]] = counts.get(member.table[x], 0) + 1
            if mode == sp.KIND_INJECTIVE:
                if all(c == 1 for c in counts.values()):
                    covered = True
                    break
            else:
                if (
                    all(c <= hi for c in counts.values())
                    and all(c >= lo for c in counts.values())
                    and (lo == 0 or len(counts) == H.ell)
                ):
                    covered = True
                    break
        if not covered:
            return sp.SplitterCheck(False, subset)
    return sp.SplitterCheck(True)


# ---------------------------------------------------------------------------
# code splitter


def test_code_splitter_constant_encoding_is_identity():
    H = sp.build_code_splitter(11, 3)
    assert H.ell == 11
    assert len(H.members) == 11
    for c in H.members:
        assert c.table == tuple(range(11))


def test_code_splitter_verifies():
    H = sp.build_code_splitter(20, 3)
    assert H.kind == sp.KIND_INJECTIVE
    assert sp.verify_splitter(H, sp.KIND_INJECTIVE).ok is True
    assert brute_verify(H, sp.KIND_INJECTIVE).ok is True


def test_code_splitter_member_count_matches_formula():
    H = sp.build_code_splitter(50, 3)
    # recompute the alphabet independently
    d = 1
    while True:
        q = least_prime_geq(max(9, (d * 9 + 3) // 2))
        need = 1
        while q**need < 50:
            need += 1
        if need <= d:
            break
        d = need
    assert len(H.members) == q == H.ell


def test_code_splitter_guards():
    with pytest.raises(ParameterError):
        sp.build_code_splitter(10, 1)
    with pytest.raises(ParameterError):
        sp.build_code_splitter(10, 13)
    with pytest.raises(ParameterError):
        sp.build_code_splitter(10**6 + 1, 3)


# ---------------------------------------------------------------------------
# interval splitter


def test_interval_splitter_single_part():
    H = sp.build_interval_splitter(5, 3, 1)
    assert len(H.members) == 1
    assert H.members[0].table == (0,) * 5
    assert sp.verify_splitter(H, sp.KIND_EVEN).ok is True


def test_interval_splitter_verifies_even():
    H = sp.build_interval_splitter(6, 4, 2)
    assert H.kind == sp.KIND_EVEN
    assert len(H.members) == math.comb(5, 1)
    assert sp.verify_splitter(H, sp.KIND_EVEN).ok is True
    assert brute_verify(H, sp.KIND_EVEN).ok is True
    # even here means exactly 2 of each color on every 4-subset
    for subset in itertools.combinations(range(6), 4):
        hit = False
        for c in H.members:
            counts = [sum(1 for x in subset if c.table[x] == j) for j in range(2)]
            if counts == [2, 2]:
                hit = True
        assert hit


def test_interval_splitter_identity_case():
    H = sp.build_interval_splitter(4, 4, 4)
    assert len(H.members) == 1
    assert H.members[0].table == (0, 1, 2, 3)
    assert sp.verify_splitter(H, sp.KIND_EVEN).ok is True
    assert sp.verify_splitter(H, sp.KIND_INJECTIVE).ok is True


def test_interval_splitter_member_count():
    H = sp.build_interval_splitter(8, 4, 4)
    assert len(H.members) == math.comb(7, 3)
    with pytest.raises(ParameterError):
        sp.build_interval_splitter(4, 5, 2)
    with pytest.raises(ParameterError):
        sp.build_interval_splitter(5, 4, 5)


# ---------------------------------------------------------------------------
# k-wise family


def test_kwise_constant_members_for_k1():
    F = sp.build_kwise_family(4, 1, 3)
    assert F.q == least_prime_geq(4)
    assert len(F.members) == F.q
    for c in F.members:
        assert len(set(c.table)) == 1


def test_kwise_size():
    F = sp.build_kwise_family(5, 2, 4)
    assert F.q == 5
    assert len(F.members) == 25


def test_kwise_pair_uniformity_full_range():
    # ell = q: every (point pair, value pair) hit exactly q^{k-2} = 1 time
    F = sp.build_kwise_family(7, 2, 7)
    assert F.q == 7
    for x, y in itertools.combinations(range(7), 2):
        tally = {}
        for c in F.members:
            key = (c.table[x], c.table[y])
            tally[key] = tally.get(key, 0) + 1
        assert all(v == 1 for v in tally.values())
        assert len(tally) == 49


def test_kwise_guard():
    with pytest.raises(ParameterError):
        sp.build_kwise_family(100, 5, 100)


# ---------------------------------------------------------------------------
# greedy splitter


def test_greedy_single_member_for_k1():
    H = sp.build_greedy_splitter(6, 1, 2)
    assert len(H.members) == 1
    assert sp.verify_splitter(H, sp.KIND_INJECTIVE).ok is True


def test_greedy_verifies_and_respects_bound():
    H = sp.build_greedy_splitter(8, 3, 2)
    assert H.ell == 6
    assert sp.verify_splitter(H, sp.KIND_INJECTIVE).ok is True
    assert brute_verify(H, sp.KIND_INJECTIVE).ok is True
    assert len(H.members) <= sp.greedy_size_bound(8, 3, 2)


def test_greedy_deterministic():
    a = sp.build_greedy_splitter(7, 2, 2)
    b = sp.build_greedy_splitter(7, 2, 2)
    assert sp.format_splitter(a) == sp.format_splitter(b)


# ---------------------------------------------------------------------------
# composition


def test_compose_degenerate_small_k():
    H = sp.compose_splitter(6, 2, 2)
    assert sp.verify_splitter(H, sp.KIND_INJECTIVE).ok is True


def test_compose_verifies_and_size_formula():
    H = sp.compose_splitter(10, 3, 2)
    assert sp.verify_splitter(H, sp.KIND_INJECTIVE).ok is True
    A = sp.build_code_splitter(10, 3)
    L = math.ceil(math.log2(3))
    B = sp.build_interval_splitter(A.ell, 3, L)
    C = sp.build_greedy_splitter(A.ell, -(-3 // L), 2)
    assert len(H.members) == len(A.members) * len(B.members) * len(C.members) ** L
    assert H.ell == C.ell * L


# ---------------------------------------------------------------------------
# verification


def test_verify_constant_family_witness():
    H = sp.SplitterFamily(
        4, 2, 3, (sp.Coloring(4, 3, (1, 1, 1, 1)),), sp.KIND_INJECTIVE
    )
    res = sp.verify_splitter(H, sp.KIND_INJECTIVE)
    assert res.ok is False
    assert res.witness == (0, 1)


def test_verify_identity_family():
    H = sp.SplitterFamily(
        5, 3, 5, (sp.Coloring(5, 5, (0, 1, 2, 3, 4)),), sp.KIND_INJECTIVE
    )
    assert sp.verify_splitter(H, sp.KIND_INJECTIVE).ok is True


def test_verify_matches_brute_on_random_families():
    rng = random.Random(43)
    for _ in range(60):
        n = rng.randint(2, 8)
        k = rng.randint(1, min(4, n))
        ell = rng.randint(1, 5)
        count = rng.randint(1, 5)
        members = tuple(
            sp.Coloring(n, ell, tuple(rng.randrange(ell) for _ in range(n)))
            for _ in range(count)
        )
        H = sp.SplitterFamily(n, k, ell, members, sp.KIND_INJECTIVE)
        for mode in (sp.KIND_INJECTIVE, sp.KIND_EVEN):
            got = sp.verify_splitter(H, mode)
            want = brute_verify(H, mode)
            assert got.ok == want.ok
            if not got.ok:
                assert got.witness == want.witness


# ---------------------------------------------------------------------------
# file format


def test_splitter_roundtrip():
    H = sp.build_interval_splitter(5, 3, 2)
    text = sp.format_splitter(H)
    assert text.startswith("splitter n=5 k=3 range=2 kind=even count=4\n")
    G = sp.parse_splitter(text)
    assert G == H
    assert sp.format_splitter(G) == text


def test_splitter_malformed():
    for bad in [
        "",
        "splitter n=2 k=2 range=2 kind=odd count=1\n0 1",
        "splitter n=2 k=2 range=2 kind=even count=2\n0 1",
        "splitter n=2 k=2 range=2 kind=even count=1\n0 1 0",
        "splitter n=2 k=2 range=2 kind=even count=1\n0 5",
        "splitter n=2 k=2 range=2 kind=even count=1\n0 x",
        "family n=2 m=0",
    ]:
        with pytest.raises(FormatError):
            sp.parse_splitter(bad)
