"""Arithmetic-circuit IR and transforms.

A circuit is a topologically ordered gate list over one of four forms:

    ("input", v)   ("const", c)   ("add", a, b)   ("mul", a, b)

where a, b are indices of strictly earlier gates.  Size is the edge count:
2 per add/mul gate, 0 for inputs and constants.

Transforms: evaluation, symbolic expansion (degree-truncated, over Z_p),
homogenization into degree-indexed components, truncation to a degree bound,
formal verification against a target polynomial, and a canonical
sum-of-products construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .algebra import (
    PrimeModulus,
    SparsePolynomial,
    make_poly,
    mono_key,
    poly_add,
    poly_const,
    poly_mul_truncated,
    poly_var,
    poly_zero,
)
from .errors import ArityError, FormatError, ParameterError, RingError

# truncation degree that never fires at desk scale
_NO_TRUNCATION = 10**9


@dataclass
class ArithmeticCircuit:
    nvars: int
    gates: tuple
    outputs: tuple
    modulus: Optional[PrimeModulus] = None

    def size(self) -> int:
        """Number of edges: 2 per add/mul gate."""
        return 2 * sum(1 for g in self.gates if g[0] in ("add", "mul"))


def make_circuit(
    nvars: int,
    gates: Sequence,
    outputs: Sequence[int],
    modulus: Optional[PrimeModulus] = None,
) -> ArithmeticCircuit:
    """Validate gate forms, topological references, and outputs."""
    gates = tuple(tuple(g) for g in gates)
    for i, g in enumerate(gates):
        tag = g[0]
        if tag == "input":
            if not 0 <= g[1] < nvars:
                raise ParameterError(f"gate {i}: input x{g[1]} outside nvars={nvars}")
        elif tag == "const":
            if not isinstance(g[1], int):
                raise ParameterError(f"gate {i}: non-integer constant")
        elif tag in ("add", "mul"):
            for ref in g[1:]:
                if not 0 <= ref < i:
                    raise ParameterError(f"gate {i}: reference {ref} not backward")
        else:
            raise ParameterError(f"gate {i}: unknown form {tag!r}")
    outputs = tuple(outputs)
    if not outputs:
        raise ParameterError("circuit needs at least one output")
    for o in outputs:
        if not 0 <= o < len(gates):
            raise ParameterError(f"output {o} is not a gate id")
    return ArithmeticCircuit(nvars, gates, outputs, modulus)


def evaluate(C: ArithmeticCircuit, point: Sequence[int]) -> list:
    """One value per output gate; mod p when the circuit has a modulus."""
    if len(point) != C.nvars:
        raise ArityError(f"point length {len(point)} != nvars {C.nvars}")
    p = C.modulus.p if C.modulus else None
    vals = [0] * len(C.gates)
    for i, g in enumerate(C.gates):
        tag = g[0]
        if tag == "input":
            v = point[g[1]]
        elif tag == "const":
            v = g[1]
        elif tag == "add":
            v = vals[g[1]] + vals[g[2]]
        else:
            v = vals[g[1]] * vals[g[2]]
        vals[i] = v % p if p else v
    return [vals[o] for o in C.outputs]


def packed_evaluator(C: ArithmeticCircuit):
    """Flatten a mod-p circuit once and return a fast point -> outputs map.

    Meant for evaluating one circuit at many points; the modulus must fit
    the int64 product kernel.
    """
    import numpy as np

    from ._kernels import MOD_EVAL_LIMIT, eval_circuit_mod, pack_circuit

    if C.modulus is None:
        raise RingError("packed evaluation requires a modulus")
    p = C.modulus.p
    if p >= MOD_EVAL_LIMIT:
        raise ParameterError(f"modulus {p} too large for int64 evaluation")
    ops, arg_a, arg_b = pack_circuit(C.gates, p)
    outputs = list(C.outputs)
    nvars = C.nvars

    def run(point: Sequence[int]) -> list:
        if len(point) != nvars:
            raise ArityError(f"point length {len(point)} != nvars {nvars}")
        arr = np.asarray(point, dtype=np.int64)
        vals = eval_circuit_mod(ops, arg_a, arg_b, arr, p)
        return [int(vals[o]) for o in outputs]

    return run


def _truncated(P: SparsePolynomial, delta: int) -> SparsePolynomial:
    from .algebra import mono_degree

    if P.degree() <= delta:
        return P
    kept = {m: c for m, c in P.coeffs.items() if mono_degree(m) <= delta}
    return SparsePolynomial(P.nvars, kept, P.modulus, delta)


def _expand_gates(C: ArithmeticCircuit, delta: int) -> list:
    # truncating at every gate (not just products) is exact for the
    # degree-<=delta part of all downstream gates
    polys = [None] * len(C.gates)
    for i, g in enumerate(C.gates):
        tag = g[0]
        if tag == "input":
            polys[i] = _truncated(poly_var(C.nvars, g[1], C.modulus), delta)
        elif tag == "const":
            polys[i] = poly_const(C.nvars, g[1], C.modulus)
        elif tag == "add":
            polys[i] = _truncated(poly_add(polys[g[1]], polys[g[2]]), delta)
        else:
            polys[i] = poly_mul_truncated(polys[g[1]], polys[g[2]], delta)
    return polys


def expand(C: ArithmeticCircuit, delta: int) -> list:
    """Gate-by-gate symbolic expansion over Z_p, truncating above delta.

    Dropping monomials of degree > delta at intermediate gates is exact for
    the degree-<=delta part of every later gate: products only raise degree.
    """
    if C.modulus is None:
        raise RingError("expansion requires a modulus")
    polys = _expand_gates(C, delta)
    return [polys[o] for o in C.outputs]


def expand_full(C: ArithmeticCircuit) -> list:
    """Untruncated expansion (test oracle for tiny circuits; any ring)."""
    polys = _expand_gates(C, _NO_TRUNCATION)
    return [polys[o] for o in C.outputs]


@dataclass
class HomogeneousCircuit:
    circuit: ArithmeticCircuit  # outputs are the component gates
    degree_of: tuple  # per gate, the homogeneous degree it computes
    component_outputs: tuple  # gate ids of the degree-0..delta parts


def homogenize(C: ArithmeticCircuit, delta: int) -> HomogeneousCircuit:
    """Split every gate into delta+1 degree-indexed homogeneous components.

    Inputs become (0, x, 0, ...), constants (c, 0, ...), adds act
    componentwise, and muls convolve: g^(d) = sum_{i+j=d} a^(i) b^(j) via a
    left-leaning add chain.  Zero components are shared and propagated, and
    unreachable gates are swept out, so the edge count stays within
    9 (delta+1)^2 size(C).
    """
    if len(C.outputs) != 1:
        raise ParameterError("homogenize expects a single-output circuit")
    if delta < 0:
        raise ParameterError("delta must be nonnegative")
    p = C.modulus.p if C.modulus else None

    gates: list = []
    degree_of: list = []
    zero_id = None

    def emit(gate, deg):
        gates.append(gate)
        degree_of.append(deg)
        return len(gates) - 1

    def zero():
        nonlocal zero_id
        if zero_id is None:
            zero_id = emit(("const", 0), 0)
        return zero_id

    def is_zero(gid):
        return gid == zero_id

    comp = []  # per original gate: component gate ids for degrees 0..delta
    for g in C.gates:
        tag = g[0]
        if tag == "input":
            row = [zero()] * (delta + 1)
            if delta >= 1:
                row[1] = emit(("input", g[1]), 1)
        elif tag == "const":
            c = g[1] % p if p else g[1]
            row = [zero()] * (delta + 1)
            if c != 0:
                row[0] = emit(("const", g[1]), 0)
        elif tag == "add":
            ca, cb = comp[g[1]], comp[g[2]]
            row = []
            for d in range(delta + 1):
                if is_zero(ca[d]):
                    row.append(cb[d])
                elif is_zero(cb[d]):
                    row.append(ca[d])
                else:
                    row.append(emit(("add", ca[d], cb[d]), d))
        else:
            ca, cb = comp[g[1]], comp[g[2]]
            row = []
            for d in range(delta + 1):
                terms = []
                for i in range(d + 1):
                    if not is_zero(ca[i]) and not is_zero(cb[d - i]):
                        terms.append(emit(("mul", ca[i], cb[d - i]), d))
                acc = None
                for t in terms:
                    acc = t if acc is None else emit(("add", acc, t), d)
                row.append(zero() if acc is None else acc)
        comp.append(row)

    outs = list(comp[C.outputs[0]])

    # dead-code elimination: keep only gates reachable from the components
    reachable = set(outs)
    for gid in range(len(gates) - 1, -1, -1):
        if gid in reachable and gates[gid][0] in ("add", "mul"):
            reachable.add(gates[gid][1])
            reachable.add(gates[gid][2])
    remap = {}
    kept_gates = []
    kept_degrees = []
    for gid in range(len(gates)):
        if gid not in reachable:
            continue
        g = gates[gid]
        if g[0] in ("add", "mul"):
            g = (g[0], remap[g[1]], remap[g[2]])
        remap[gid] = len(kept_gates)
        kept_gates.append(g)
        kept_degrees.append(degree_of[gid])
    outs = tuple(remap[o] for o in outs)

    circuit = ArithmeticCircuit(C.nvars, tuple(kept_gates), outs, C.modulus)
    return HomogeneousCircuit(circuit, tuple(kept_degrees), outs)


def truncate_to_degree(C: ArithmeticCircuit, delta: int) -> ArithmeticCircuit:
    """Chain-add the homogeneous components of degree <= delta into one
    output; every gate of the result computes a polynomial of degree <= delta."""
    hom = homogenize(C, delta)
    base = hom.circuit
    gates = list(base.gates)
    zero_ids = {
        gid
        for gid, g in enumerate(gates)
        if g == ("const", 0)
    }
    acc = None
    for o in hom.component_outputs:
        if o in zero_ids:
            continue
        if acc is None:
            acc = o
        else:
            gates.append(("add", acc, o))
            acc = len(gates) - 1
    if acc is None:
        gates.append(("const", 0))
        acc = len(gates) - 1
    return ArithmeticCircuit(C.nvars, tuple(gates), (acc,), C.modulus)


@dataclass
class VerifyResult:
    accepted: bool
    # on reject: (monomial, circuit coefficient, target coefficient)
    witness: Optional[tuple] = None


def verify_circuit(
    C: ArithmeticCircuit,
    target: SparsePolynomial,
    delta: int,
    pm: PrimeModulus,
) -> VerifyResult:
    """Accept iff the degree-<=delta expansion of C equals target over Z_p.

    On reject, the witness is the graded-lex-smallest differing monomial
    together with both coefficients.
    """
    if C.modulus is None or C.modulus.p != pm.p:
        raise RingError("circuit modulus does not match verification prime")
    if target.modulus is None or target.modulus.p != pm.p:
        raise RingError("target modulus does not match verification prime")
    if target.degree() > delta:
        raise ParameterError("target degree exceeds delta")
    if len(C.outputs) != 1:
        raise ParameterError("verify_circuit expects a single-output circuit")
    got = expand(C, delta)[0]
    if got.coeffs == target.coeffs:
        return VerifyResult(True)
    diff = [
        m
        for m in set(got.coeffs) | set(target.coeffs)
        if got.coeffs.get(m, 0) != target.coeffs.get(m, 0)
    ]
    m = min(diff, key=mono_key)
    return VerifyResult(False, (m, got.coeffs.get(m, 0), target.coeffs.get(m, 0)))


def sum_of_products_circuit(P: SparsePolynomial) -> ArithmeticCircuit:
    """Canonical circuit: one mul chain per monomial (with a constant gate
    when the coefficient is not 1) under a balanced add tree.

    Size is at most 2 (sum of monomial degrees + number of monomials).
    """
    gates: list = []
    var_gate: dict = {}

    def emit(g):
        gates.append(g)
        return len(gates) - 1

    def var(v):
        if v not in var_gate:
            var_gate[v] = emit(("input", v))
        return var_gate[v]

    nodes = []
    for mono, coeff in P.coeffs.items():
        factors = []
        for v, e in mono:
            factors.extend([var(v)] * e)
        if not factors:
            nodes.append(emit(("const", coeff)))
            continue
        acc = emit(("const", coeff)) if coeff != 1 else None
        for f in factors:
            acc = f if acc is None else emit(("mul", acc, f))
        nodes.append(acc)
    if not nodes:
        nodes.append(emit(("const", 0)))
    while len(nodes) > 1:
        nxt = []
        for i in range(0, len(nodes) - 1, 2):
            nxt.append(emit(("add", nodes[i], nodes[i + 1])))
        if len(nodes) % 2:
            nxt.append(nodes[-1])
        nodes = nxt
    return ArithmeticCircuit(P.nvars, tuple(gates), (nodes[0],), P.modulus)


def format_circuit(C: ArithmeticCircuit) -> str:
    """Serialize to the netlist text format."""
    mod = str(C.modulus.p) if C.modulus else "none"
    lines = [f"circuit nvars={C.nvars} modulus={mod}"]
    for i, g in enumerate(C.gates):
        tag = g[0]
        if tag in ("input", "const"):
            lines.append(f"g{i} = {tag} {g[1]}")
        else:
            lines.append(f"g{i} = {tag} g{g[1]} g{g[2]}")
    lines.append("output " + " ".join(f"g{o}" for o in C.outputs))
    return "\n".join(lines) + "\n"


def parse_circuit(text: str) -> ArithmeticCircuit:
    """Parse the netlist text format (ids strictly increasing, refs backward)."""
    from .algebra import PrimeModulus as _PM

    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise FormatError("empty circuit file")
    parts = lines[0].split()
    if parts[0] != "circuit":
        raise FormatError(f"expected 'circuit' header, got {lines[0]!r}")
    fields = dict(p.split("=", 1) for p in parts[1:] if "=" in p)
    if "nvars" not in fields or "modulus" not in fields:
        raise FormatError(f"bad circuit header {lines[0]!r}")
    try:
        nvars = int(fields["nvars"])
    except ValueError:
        raise FormatError("bad nvars") from None
    modulus = None
    if fields["modulus"] != "none":
        try:
            modulus = _PM(int(fields["modulus"]))
        except ValueError:
            raise FormatError(f"bad modulus {fields['modulus']!r}") from None

    def gate_ref(tok, id_map):
        if not tok.startswith("g"):
            raise FormatError(f"bad gate reference {tok!r}")
        try:
            gid = int(tok[1:])
        except ValueError:
            raise FormatError(f"bad gate reference {tok!r}") from None
        if gid not in id_map:
            raise FormatError(f"reference to undefined gate {tok!r}")
        return id_map[gid]

    gates = []
    id_map: dict = {}
    last_id = -1
    outputs = None
    for ln in lines[1:]:
        toks = ln.split()
        if toks[0] == "output":
            outputs = [gate_ref(t, id_map) for t in toks[1:]]
            break
        if len(toks) < 4 or toks[1] != "=":
            raise FormatError(f"bad gate line {ln!r}")
        if not toks[0].startswith("g"):
            raise FormatError(f"bad gate id {toks[0]!r}")
        try:
            gid = int(toks[0][1:])
        except ValueError:
            raise FormatError(f"bad gate id {toks[0]!r}") from None
        if gid <= last_id:
            raise FormatError(f"gate ids must be strictly increasing at {ln!r}")
        op = toks[2]
        if op == "input":
            gate = ("input", _parse_int(toks[3], ln))
        elif op == "const":
            gate = ("const", _parse_int(toks[3], ln))
        elif op in ("add", "mul"):
            if len(toks) != 5:
                raise FormatError(f"bad gate line {ln!r}")
            gate = (op, gate_ref(toks[3], id_map), gate_ref(toks[4], id_map))
        else:
            raise FormatError(f"unknown gate op {op!r}")
        id_map[gid] = len(gates)
        gates.append(gate)
        last_id = gid
    if outputs is None:
        raise FormatError("missing 'output' footer")
    try:
        return make_circuit(nvars, gates, outputs, modulus)
    except ParameterError as exc:
        raise FormatError(str(exc)) from None


def _parse_int(tok: str, ln: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise FormatError(f"bad integer {tok!r} in {ln!r}") from None
