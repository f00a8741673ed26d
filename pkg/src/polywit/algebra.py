"""Exact arithmetic over Z and Z_p, and canonical sparse multivariate polynomials.

A monomial is a tuple of (variable index, exponent) pairs with strictly
increasing indices and positive exponents; the constant monomial is ().

    x0^2 * x3  ->  ((0, 2), (3, 1))

A polynomial maps monomials to nonzero integer coefficients.  The table is
kept in graded lexicographic order (total degree first, then the dense
exponent vector), so equal polynomials serialize byte-identically.

Coefficients are arbitrary-precision ints over Z; with a modulus p they are
residues in [0, p).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence

from .errors import ArityError, FormatError, ParameterError, RingError

Monomial = tuple  # tuple[tuple[int, int], ...]

# Witnesses making Miller-Rabin deterministic for all n < 3.3 * 10^24.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_TRIAL_DIVISION_LIMIT = 10**6


def is_prime(n: int) -> bool:
    """Deterministic primality test for n < 3.3 * 10^24."""
    if n < 2:
        return False
    if n < _TRIAL_DIVISION_LIMIT:
        if n < 4:
            return True
        if n % 2 == 0:
            return False
        f = 3
        while f * f <= n:
            if n % f == 0:
                return False
            f += 2
        return True
    for small in _MR_WITNESSES:
        if n % small == 0:
            return n == small
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def next_prime_at_least(n: int) -> int:
    """Smallest prime >= n."""
    n = max(n, 2)
    while not is_prime(n):
        n += 1
    return n


@dataclass(frozen=True)
class PrimeModulus:
    """A prime p, optionally tagged with the dyadic interval exponent t
    it was drawn from (2^{t+1} <= p <= 2^{t+2})."""

    p: int
    t: Optional[int] = None


def find_prime_in_dyadic_interval(t: int) -> PrimeModulus:
    """Smallest prime p with 2^{t+1} <= p <= 2^{t+2}.

    Existence is Bertrand's postulate.  t is capped at 60 so p and products
    of residues stay comfortably inside machine-word-friendly ranges.
    """
    if not 0 <= t <= 60:
        raise ParameterError(f"interval exponent t={t} outside [0, 60]")
    lo, hi = 1 << (t + 1), 1 << (t + 2)
    p = next_prime_at_least(lo)
    if p > hi:  # unreachable by Bertrand; guards against logic rot
        raise AssertionError(f"no prime in [{lo}, {hi}]")
    return PrimeModulus(p, t)


def cantor_pair(s: int, k: int) -> int:
    """The pairing (s, k) -> (s+k)(s+k+1)/2 + k, injective on pairs."""
    return (s + k) * (s + k + 1) // 2 + k


def mono_degree(mono: Monomial) -> int:
    return sum(e for _, e in mono)


def mono_key(mono: Monomial):
    """Sort key realizing graded lexicographic order on monomials.

    Negating the variable index makes tuple comparison agree with
    lexicographic comparison of dense exponent vectors.
    """
    return (mono_degree(mono), tuple((-v, e) for v, e in mono))


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    """Product of two canonical monomials (merge sorted term lists)."""
    if not a:
        return b
    if not b:
        return a
    out = []
    i = j = 0
    while i < len(a) and j < len(b):
        va, ea = a[i]
        vb, eb = b[j]
        if va == vb:
            out.append((va, ea + eb))
            i += 1
            j += 1
        elif va < vb:
            out.append(a[i])
            i += 1
        else:
            out.append(b[j])
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return tuple(out)


@dataclass
class SparsePolynomial:
    nvars: int
    coeffs: dict  # Monomial -> int, canonical order, no zeros
    modulus: Optional[PrimeModulus] = None
    degree_bound: int = 0

    def degree(self) -> int:
        return max((mono_degree(m) for m in self.coeffs), default=0)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparsePolynomial):
            return NotImplemented
        sp = self.modulus.p if self.modulus else None
        op = other.modulus.p if other.modulus else None
        return (self.nvars, sp, self.coeffs) == (other.nvars, op, other.coeffs)


def make_poly(
    nvars: int,
    terms: Mapping[Monomial, int] | Iterable[tuple[Monomial, int]],
    modulus: Optional[PrimeModulus] = None,
    degree_bound: Optional[int] = None,
) -> SparsePolynomial:
    """Canonicalize a monomial->coefficient table into a SparsePolynomial.

    Like terms are combined, zero coefficients dropped, coefficients reduced
    mod p when a modulus is given, and the table sorted into graded lex order.
    """
    items = terms.items() if isinstance(terms, Mapping) else terms
    acc: dict = {}
    for mono, coeff in items:
        acc[mono] = acc.get(mono, 0) + coeff
    p = modulus.p if modulus else None
    cleaned = {}
    maxdeg = 0
    for mono in sorted(acc, key=mono_key):
        c = acc[mono] % p if p else acc[mono]
        if c == 0:
            continue
        for v, e in mono:
            if not 0 <= v < nvars:
                raise ParameterError(f"variable x{v} outside nvars={nvars}")
            if e <= 0:
                raise ParameterError(f"non-positive exponent in {mono}")
        cleaned[mono] = c
        maxdeg = max(maxdeg, mono_degree(mono))
    if degree_bound is None:
        degree_bound = maxdeg
    elif maxdeg > degree_bound:
        raise ParameterError(
            f"monomial degree {maxdeg} exceeds degree bound {degree_bound}"
        )
    return SparsePolynomial(nvars, cleaned, modulus, degree_bound)


def poly_zero(nvars: int, modulus: Optional[PrimeModulus] = None) -> SparsePolynomial:
    return SparsePolynomial(nvars, {}, modulus, 0)


def poly_const(
    nvars: int, c: int, modulus: Optional[PrimeModulus] = None
) -> SparsePolynomial:
    return make_poly(nvars, {(): c}, modulus)


def poly_var(
    nvars: int, v: int, modulus: Optional[PrimeModulus] = None
) -> SparsePolynomial:
    return make_poly(nvars, {((v, 1),): 1}, modulus)


def _check_ring(a: SparsePolynomial, b: SparsePolynomial) -> None:
    if a.nvars != b.nvars:
        raise RingError(f"variable counts differ: {a.nvars} vs {b.nvars}")
    pa = a.modulus.p if a.modulus else None
    pb = b.modulus.p if b.modulus else None
    if pa != pb:
        raise RingError(f"moduli differ: {pa} vs {pb}")


def poly_add(a: SparsePolynomial, b: SparsePolynomial) -> SparsePolynomial:
    """Coefficient-wise sum in canonical form."""
    _check_ring(a, b)
    acc = dict(a.coeffs)
    for mono, coeff in b.coeffs.items():
        acc[mono] = acc.get(mono, 0) + coeff
    return make_poly(
        a.nvars, acc, a.modulus, max(a.degree_bound, b.degree_bound)
    )


def poly_mul_truncated(
    a: SparsePolynomial, b: SparsePolynomial, delta: int
) -> SparsePolynomial:
    """Product with every monomial of total degree > delta discarded."""
    _check_ring(a, b)
    acc: dict = {}
    b_items = [(m, mono_degree(m), c) for m, c in b.coeffs.items()]
    for ma, ca in a.coeffs.items():
        da = mono_degree(ma)
        for mb, db, cb in b_items:
            if da + db > delta:
                continue
            mono = mono_mul(ma, mb)
            acc[mono] = acc.get(mono, 0) + ca * cb
    return make_poly(a.nvars, acc, a.modulus, delta)


def poly_eval(P: SparsePolynomial, point: Sequence[int]) -> int:
    """Direct monomial-by-monomial evaluation; exact, or mod p if P has one."""
    if len(point) != P.nvars:
        raise ArityError(f"point length {len(point)} != nvars {P.nvars}")
    p = P.modulus.p if P.modulus else None
    if p:
        point = [x % p for x in point]
    total = 0
    for mono, coeff in P.coeffs.items():
        term = coeff
        for v, e in mono:
            term *= point[v] ** e
        total += term
    return total % p if p else total


def reduce_mod(P: SparsePolynomial, pm: PrimeModulus) -> SparsePolynomial:
    """Reduce an integer polynomial's coefficients into [0, p)."""
    if P.modulus is not None:
        raise RingError("polynomial already carries a modulus")
    return make_poly(P.nvars, P.coeffs, pm, P.degree_bound)


def format_mono(mono: Monomial) -> str:
    if not mono:
        return "1"
    return " ".join(f"x{v}^{e}" for v, e in mono)


def format_poly(P: SparsePolynomial) -> str:
    """Serialize to the polynomial text format (canonical, deterministic)."""
    mod = str(P.modulus.p) if P.modulus else "none"
    lines = [f"poly nvars={P.nvars} degree={P.degree_bound} modulus={mod}"]
    for mono, coeff in P.coeffs.items():
        lines.append(f"{coeff} {format_mono(mono)}")
    return "\n".join(lines) + "\n"


def _parse_header(line: str, tag: str, keys: Sequence[str]) -> dict:
    parts = line.split()
    if not parts or parts[0] != tag:
        raise FormatError(f"expected '{tag}' header, got {line!r}")
    seen = {}
    for part in parts[1:]:
        if "=" not in part:
            raise FormatError(f"bad header field {part!r}")
        k, v = part.split("=", 1)
        seen[k] = v
    for k in keys:
        if k not in seen:
            raise FormatError(f"missing header field {k}= in {line!r}")
    return seen


def parse_poly(text: str) -> SparsePolynomial:
    """Parse the polynomial text format."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise FormatError("empty polynomial file")
    head = _parse_header(lines[0], "poly", ("nvars", "degree", "modulus"))
    try:
        nvars = int(head["nvars"])
        degree = int(head["degree"])
    except ValueError as exc:
        raise FormatError(f"bad poly header: {exc}") from None
    modulus = None
    if head["modulus"] != "none":
        try:
            modulus = PrimeModulus(int(head["modulus"]))
        except ValueError:
            raise FormatError(f"bad modulus {head['modulus']!r}") from None
    terms = {}
    for ln in lines[1:]:
        parts = ln.split()
        try:
            coeff = int(parts[0])
        except (ValueError, IndexError):
            raise FormatError(f"bad monomial line {ln!r}") from None
        factors = []
        for tok in parts[1:]:
            if tok == "1":
                continue
            if not tok.startswith("x") or "^" not in tok:
                raise FormatError(f"bad factor {tok!r} in {ln!r}")
            v_s, e_s = tok[1:].split("^", 1)
            try:
                factors.append((int(v_s), int(e_s)))
            except ValueError:
                raise FormatError(f"bad factor {tok!r} in {ln!r}") from None
        mono = tuple(sorted(factors))
        if any(e <= 0 for _, e in mono) or len({v for v, _ in mono}) != len(mono):
            raise FormatError(f"non-canonical monomial in {ln!r}")
        if mono in terms:
            raise FormatError(f"duplicate monomial in {ln!r}")
        terms[mono] = coeff
    try:
        return make_poly(nvars, terms, modulus, degree_bound=degree)
    except ParameterError as exc:
        raise FormatError(str(exc)) from None
