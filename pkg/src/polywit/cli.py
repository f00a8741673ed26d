"""Batch command-line surface.

Subcommands cover the full construct-verify-evaluate workflow: formulate a
problem into a polynomial bundle, assign an instance, decide, build and
check circuits and splitters, and run the whole pipeline over instance
files.  Commands are deterministic: identical inputs give byte-identical
stdout.  Wall-clock diagnostics go to stderr only.

Exit codes: 0 ok, 2 parameter error, 3 verification reject, 64 usage,
65 malformed input.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from typing import Optional

from . import __version__
from .algebra import (
    find_prime_in_dyadic_interval,
    parse_poly,
    poly_eval,
    reduce_mod,
)
from .circuits import (
    evaluate as circuit_evaluate,
    format_circuit,
    homogenize,
    packed_evaluator,
    parse_circuit,
    sum_of_products_circuit,
    verify_circuit,
)
from .errors import ArityError, FormatError, ParameterError, RingError
from . import formulations as fm
from . import solvers as sv
from . import splitters as sp
from ._kernels import MOD_EVAL_LIMIT

EXIT_OK = 0
EXIT_PARAMETER = 2
EXIT_REJECT = 3
EXIT_USAGE = 64
EXIT_MALFORMED = 65


class _Parser(argparse.ArgumentParser):
    """argparse maps its own errors to exit 2; usage errors here are 64."""

    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit(EXIT_USAGE)


class _Usage(Exception):
    pass


# ---------------------------------------------------------------------------
# problem registry

_GRAPH, _DIGRAPH, _CNF, _FAMILY, _HYPER3 = "graph", "digraph", "cnf", "family", "hyper3"


def _steiner_form(params, theta):
    G = sv.ugraph(params["n"], [])
    return fm.formulate_k_steiner_tree(G, params["terminals"], params["t"], theta)


def _kpath_form(params, theta):
    G = sv.digraph(params["n"], [])
    return fm.formulate_k_path(G, params["k"], theta, params.get("c"))


_PROBLEMS = {
    "ham-path": {
        "params": ("n",),
        "instance": _DIGRAPH,
        "formulate": lambda p, th: fm.formulate_hamiltonian_path(p["n"], th),
        "assign": lambda inst, th, p: fm.assign_hamiltonian_path(inst, th),
        "oracle": lambda inst, p: sv.hamiltonian_path(inst),
    },
    "indep-set": {
        "params": ("n", "t"),
        "instance": _GRAPH,
        "formulate": lambda p, th: fm.formulate_independent_set(p["n"], p["t"], th),
        "assign": lambda inst, th, p: fm.assign_independent_set(inst, th),
        "oracle": lambda inst, p: sv.max_independent_set(inst) >= p["t"],
    },
    "clique": {
        "params": ("n", "t"),
        "instance": _GRAPH,
        "formulate": lambda p, th: fm.formulate_clique(p["n"], p["t"], th),
        "assign": lambda inst, th, p: fm.assign_clique(inst, th),
        "oracle": lambda inst, p: sv.max_independent_set(sv.complement(inst)) >= p["t"],
    },
    "vertex-cover": {
        "params": ("n", "t"),
        "instance": _GRAPH,
        "formulate": lambda p, th: fm.formulate_vertex_cover(p["n"], p["t"], th),
        "assign": lambda inst, th, p: fm.assign_vertex_cover(inst, th),
        "oracle": lambda inst, p: sv.max_independent_set(inst) >= inst.n - p["t"],
    },
    "max-ksat": {
        "params": ("n", "m", "k", "t"),
        "instance": _CNF,
        "formulate": lambda p, th: fm.formulate_max_ksat(
            p["n"], p["m"], p["k"], p["t"], th
        ),
        "assign": lambda inst, th, p: fm.assign_max_ksat(inst, th, p["t"]),
    },
    "ksat": {
        "params": ("n", "m", "k"),
        "instance": _CNF,
        "formulate": lambda p, th: fm.formulate_ksat(p["n"], p["m"], p["k"], th),
        "assign": lambda inst, th, p: fm.assign_ksat(inst, th),
    },
    "coloring": {
        "params": ("n", "t"),
        "instance": _GRAPH,
        "formulate": lambda p, th: fm.formulate_graph_coloring(p["n"], p["t"], th),
        "assign": lambda inst, th, p: fm.assign_graph_coloring(inst, th, p["t"]),
        "oracle": lambda inst, p: sv.chromatic_at_most(inst, p["t"]),
    },
    "set-cover": {
        "params": ("n", "m", "t"),
        "instance": _FAMILY,
        "formulate": lambda p, th: fm.formulate_set_cover(p["n"], p["m"], p["t"], th),
        "assign": lambda inst, th, p: fm.assign_set_cover(inst, th, p["t"]),
        "oracle": lambda inst, p: sv.set_cover_at_most(inst, range(inst.n), p["t"]),
    },
    "3d-matching": {
        "params": ("n", "t"),
        "instance": _HYPER3,
        "formulate": lambda p, th: fm.formulate_3d_matching(p["n"], p["t"], th),
        "assign": lambda inst, th, p: fm.assign_3d_matching(inst, th),
    },
    "k-vertex-cover": {
        "params": ("n", "k"),
        "instance": _GRAPH,
        "formulate": lambda p, th: fm.formulate_k_vertex_cover(p["n"], p["k"], th),
        "assign": lambda inst, th, p: fm.assign_k_vertex_cover(inst, th),
    },
    "k-set-splitting": {
        "params": ("n", "m", "k"),
        "instance": _FAMILY,
        "formulate": lambda p, th: fm.formulate_k_set_splitting(
            p["n"], p["m"], p["k"], th
        ),
        "assign": lambda inst, th, p: fm.assign_k_set_splitting(inst, th, p["k"]),
    },
    "k-steiner-tree": {
        "params": ("n", "terminals", "t"),
        "instance": _GRAPH,
        "formulate": _steiner_form,
        "assign": lambda inst, th, p: fm.assign_k_steiner_tree(
            inst, p["terminals"], p["t"], th
        ),
    },
    "k-internal-spanning-tree": {
        "params": ("n", "k"),
        "instance": _GRAPH,
        "formulate": lambda p, th: fm.formulate_k_internal_spanning_tree(
            p["n"], p["k"], th
        ),
        "assign": lambda inst, th, p: fm.assign_k_internal_spanning_tree(inst, th),
    },
    "k-leaf-spanning-tree": {
        "params": ("n", "k"),
        "instance": _GRAPH,
        "formulate": lambda p, th: fm.formulate_k_leaf_spanning_tree(
            p["n"], p["k"], th
        ),
        "assign": lambda inst, th, p: fm.assign_k_leaf_spanning_tree(inst, th),
    },
    "k-nonblocker": {
        "params": ("n", "k"),
        "instance": _GRAPH,
        "formulate": lambda p, th: fm.formulate_k_nonblocker(p["n"], p["k"], th),
        "assign": lambda inst, th, p: fm.assign_k_nonblocker(inst, th),
    },
    "k-path": {
        "params": ("n", "k"),
        "instance": _DIGRAPH,
        "formulate": _kpath_form,
        "assign": lambda inst, th, p: fm.assign_k_path(
            inst, p["k"], th, p.get("c")
        ),
    },
}


def _parse_kv(tokens) -> dict:
    out = {}
    for tok in tokens:
        if "=" not in tok:
            raise _Usage(f"expected key=value, got {tok!r}")
        key, val = tok.split("=", 1)
        if key == "terminals":
            try:
                out[key] = tuple(int(x) for x in val.split(",") if x != "")
            except ValueError:
                raise _Usage(f"bad terminals list {val!r}") from None
        else:
            try:
                out[key] = int(val)
            except ValueError:
                raise _Usage(f"bad integer for {key}: {val!r}") from None
    return out


def _require_params(problem: str, params: dict):
    spec = _PROBLEMS[problem]["params"]
    missing = [name for name in spec if name not in params]
    if missing:
        raise _Usage(f"{problem} needs parameters: {' '.join(missing)}")


def _formulate(problem: str, params: dict, theta: int) -> fm.FormulationOutput:
    _require_params(problem, params)
    return _PROBLEMS[problem]["formulate"](params, theta)


def _read_instance(problem: str, path: str):
    kind = _PROBLEMS[problem]["instance"]
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    if kind in (_GRAPH, _DIGRAPH):
        G = sv.parse_graph(text)
        if kind == _DIGRAPH and not isinstance(G, sv.DirectedGraph):
            raise ParameterError(f"{problem} expects a directed graph")
        if kind == _GRAPH and not isinstance(G, sv.UndirectedGraph):
            raise ParameterError(f"{problem} expects an undirected graph")
        return G
    if kind == _CNF:
        return sv.parse_cnf(text)
    if kind == _FAMILY:
        return sv.parse_family(text)
    return sv.parse_hyper3(text)


def _instance_sizes(problem: str, inst) -> dict:
    kind = _PROBLEMS[problem]["instance"]
    if kind in (_GRAPH, _DIGRAPH):
        return {"n": inst.n}
    if kind == _CNF:
        return {"n": inst.nvars, "m": len(inst.clauses), "k": inst.width}
    if kind == _FAMILY:
        return {"n": inst.n, "m": len(inst.sets)}
    return {"n": inst.n}


def _write(path: Optional[str], text: str):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


# ---------------------------------------------------------------------------
# subcommands


def _cmd_formulate(args) -> int:
    params = _parse_kv(args.params)
    theta = args.theta if args.theta is not None else params.pop("theta", None)
    if theta is None:
        raise _Usage("formulate needs theta")
    form = _formulate(args.problem, params, theta)
    outdir = args.out
    os.makedirs(outdir, exist_ok=True)
    from .algebra import format_poly

    with open(os.path.join(outdir, "legend.txt"), "w", encoding="utf-8") as fh:
        fh.write(fm.format_legend(form))
    with open(os.path.join(outdir, "poly.txt"), "w", encoding="utf-8") as fh:
        fh.write(format_poly(form.poly))
    with open(os.path.join(outdir, "meta.txt"), "w", encoding="utf-8") as fh:
        fh.write(fm.format_meta(form))
    if args.problem == "k-path":
        family = fm.kpath_splitter_family(
            form.params["n"], form.params["k"], form.params["c"]
        )
        with open(os.path.join(outdir, "splitter.txt"), "w", encoding="utf-8") as fh:
            fh.write(sp.format_splitter(family))
    sys.stdout.write(
        f"formulate problem={form.problem} s={form.s} delta={form.delta}"
        f" monomials={len(form.poly.coeffs)} out={outdir}\n"
    )
    return EXIT_OK


def _cmd_assign(args) -> int:
    params = _parse_kv(args.params)
    theta = args.theta if args.theta is not None else params.pop("theta", None)
    if theta is None:
        raise _Usage("assign needs theta")
    inst = _read_instance(args.problem, args.instance)
    params = {**_instance_sizes(args.problem, inst), **params}
    _require_params(args.problem, params)
    assignment = _PROBLEMS[args.problem]["assign"](inst, theta, params)
    _write(args.out, fm.format_assignment(assignment))
    return EXIT_OK


def _cmd_decide(args) -> int:
    with open(os.path.join(args.bundle, "meta.txt"), "r", encoding="utf-8") as fh:
        meta = fm.parse_meta(fh.read())
    with open(os.path.join(args.bundle, "poly.txt"), "r", encoding="utf-8") as fh:
        P = parse_poly(fh.read())
    with open(args.assignment, "r", encoding="utf-8") as fh:
        assignment = fm.parse_assignment(fh.read())
    if len(assignment.values) != P.nvars or meta.get("s") not in (None, P.nvars):
        raise ArityError(
            f"assignment has {len(assignment.values)} bits, polynomial"
            f" expects {P.nvars}"
        )
    value = poly_eval(P, list(assignment.values))
    verdict = "yes" if value != 0 else "no"
    sys.stdout.write(f"{verdict} value={value}\n")
    return EXIT_OK


def _read_text(path: str) -> str:
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _cmd_circuit(args) -> int:
    if args.action == "build-sop":
        P = parse_poly(_read_text(args.files[0]))
        C = sum_of_products_circuit(P)
        _write(args.out, format_circuit(C))
        return EXIT_OK
    if args.action == "verify":
        if len(args.files) != 2:
            raise _Usage("circuit verify needs <circuit-file> <poly-file>")
        C = parse_circuit(_read_text(args.files[0]))
        P = parse_poly(_read_text(args.files[1]))
        if P.modulus is None or C.modulus is None:
            raise ParameterError("verification requires mod-p circuit and polynomial")
        delta = args.delta if args.delta is not None else P.degree()
        res = verify_circuit(C, P, delta, P.modulus)
        if res.accepted:
            sys.stdout.write("accept\n")
            return EXIT_OK
        mono, got, want = res.witness
        sys.stdout.write(
            f"reject monomial={_mono_text(mono)} circuit={got} target={want}\n"
        )
        return EXIT_REJECT
    if args.action == "homogenize":
        C = parse_circuit(_read_text(args.files[0]))
        if args.delta is None:
            raise _Usage("homogenize needs --delta")
        H = homogenize(C, args.delta)
        _write(args.out, format_circuit(H.circuit))
        return EXIT_OK
    # eval
    if len(args.files) != 2:
        raise _Usage("circuit eval needs <circuit-file> <assignment-file>")
    C = parse_circuit(_read_text(args.files[0]))
    assignment = fm.parse_assignment(_read_text(args.files[1]))
    values = circuit_evaluate(C, list(assignment.values))
    sys.stdout.write(" ".join(str(v) for v in values) + "\n")
    return EXIT_OK


def _mono_text(mono) -> str:
    if not mono:
        return "1"
    return "*".join(f"x{v}^{e}" for v, e in mono)


def _cmd_splitter(args) -> int:
    if args.action == "build":
        params = _parse_kv(args.params)
        kind = args.kind
        try:
            n, k = params["n"], params["k"]
        except KeyError:
            raise _Usage("splitter build needs n= and k=") from None
        if kind == "code":
            fam = sp.build_code_splitter(n, k)
        elif kind == "interval":
            if "ell" not in params:
                raise _Usage("interval build needs ell=")
            fam = sp.build_interval_splitter(n, k, params["ell"])
        elif kind == "greedy":
            if "c" not in params:
                raise _Usage("greedy build needs c=")
            fam = sp.build_greedy_splitter(n, k, params["c"])
        else:
            if "c" not in params:
                raise _Usage("compose build needs c=")
            fam = sp.compose_splitter(n, k, params["c"])
        sys.stdout.write(
            f"splitter kind={kind} n={fam.n} k={fam.k} range={fam.ell}"
            f" size={len(fam.members)}\n"
        )
        _write(args.out, sp.format_splitter(fam))
        return EXIT_OK
    # verify
    fam = sp.parse_splitter(_read_text(args.family))
    mode = args.mode if args.mode else fam.kind
    res = sp.verify_splitter(fam, mode)
    if res.ok:
        sys.stdout.write("true\n")
        return EXIT_OK
    sys.stdout.write(
        "false witness=" + ",".join(str(x) for x in res.witness) + "\n"
    )
    return EXIT_REJECT


def _pick_prime(n_monomials: int, s: int, policy: str):
    if policy == "svar":
        t_exp = s
    else:
        t_exp = max(int(n_monomials).bit_length(), 0)
    return find_prime_in_dyadic_interval(t_exp), t_exp


def _cmd_pipeline(args) -> int:
    kv_tokens = [tok for tok in args.args if "=" in tok]
    paths_in = [tok for tok in args.args if "=" not in tok]
    params = _parse_kv(kv_tokens)
    theta = args.theta if args.theta is not None else params.pop("theta", None)
    if theta is None:
        raise _Usage("pipeline needs theta")
    t_start = time.perf_counter()

    instances = []
    for path in paths_in:
        inst = _read_instance(args.problem, path)
        sizes = _instance_sizes(args.problem, inst)
        merged = {**sizes, **params}
        if instances and merged != instances[0][2]:
            raise ParameterError(
                f"instance {path} disagrees on size parameters"
            )
        instances.append((path, inst, merged))

    eff = instances[0][2] if instances else dict(params)
    _require_params(args.problem, eff)
    form = _formulate(args.problem, eff, theta)
    t_form = time.perf_counter()

    n_monomials = len(form.poly.coeffs)
    pm, t_exp = _pick_prime(n_monomials, form.s, args.prime_policy)
    Pmod = reduce_mod(form.poly, pm)
    if args.circuit:
        C = parse_circuit(_read_text(args.circuit))
        if C.modulus is None or C.modulus.p != pm.p:
            raise ParameterError(
                f"candidate circuit must be mod {pm.p}, the pipeline prime"
            )
    else:
        C = sum_of_products_circuit(Pmod)
    t_build = time.perf_counter()

    res = verify_circuit(C, Pmod, form.delta, pm)
    t_verify = time.perf_counter()

    sys.stdout.write(
        f"pipeline problem={form.problem} theta={theta} instances={len(instances)}\n"
        f"poly s={form.s} delta={form.delta} monomials={n_monomials}\n"
        f"prime policy={args.prime_policy} t={t_exp} p={pm.p}\n"
        f"circuit gates={len(C.gates)} size={C.size()}\n"
    )
    if not res.accepted:
        mono, got, want = res.witness
        sys.stdout.write(
            f"verify reject monomial={_mono_text(mono)}"
            f" circuit={got} target={want}\n"
        )
        return EXIT_REJECT
    sys.stdout.write("verify accept\n")

    runner = (
        packed_evaluator(C)
        if pm.p < MOD_EVAL_LIMIT
        else (lambda pt: circuit_evaluate(C, pt))
    )
    assign = _PROBLEMS[args.problem]["assign"]

    def solve(entry):
        path, inst, merged = entry
        bits = assign(inst, theta, merged).values
        value = runner(list(bits))[0]
        return path, value

    if args.jobs > 1 and len(instances) > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(solve, instances))
    else:
        results = [solve(entry) for entry in instances]
    for i, (path, value) in enumerate(results):
        verdict = "yes" if value % pm.p != 0 else "no"
        sys.stdout.write(
            f"instance {i} file={os.path.basename(path)}"
            f" value={value} decision={verdict}\n"
        )
    t_done = time.perf_counter()
    sys.stderr.write(
        "timing formulate=%.3fs build=%.3fs verify=%.3fs solve=%.3fs\n"
        % (t_form - t_start, t_build - t_form, t_verify - t_build, t_done - t_verify)
    )
    return EXIT_OK


# ---------------------------------------------------------------------------
# selftest


def _selftest_algebra(rng) -> list:
    from .algebra import is_prime

    checks = []
    for t in range(0, 21):
        pm = find_prime_in_dyadic_interval(t)
        checks.append(("prime interval t=%d" % t, (1 << (t + 1)) <= pm.p <= (1 << (t + 2)) and is_prime(pm.p)))
    pairs = {fm.param_index(s, k) for s in range(60) for k in range(60)}
    checks.append(("cantor pairs distinct", len(pairs) == 3600))
    return checks


def _selftest_splitters(rng) -> list:
    checks = []
    fam = sp.build_code_splitter(20, 3)
    checks.append(("code (20,3)", sp.verify_splitter(fam, "injective").ok))
    fam = sp.build_interval_splitter(6, 4, 2)
    checks.append(("interval (6,4,2)", sp.verify_splitter(fam, "even").ok))
    fam = sp.build_greedy_splitter(8, 3, 2)
    checks.append(("greedy (8,3,2)", sp.verify_splitter(fam, "injective").ok))
    fam = sp.compose_splitter(10, 3, 2)
    checks.append(("compose (10,3,2)", sp.verify_splitter(fam, "injective").ok))
    return checks


def _selftest_circuits(rng) -> list:
    from .algebra import PrimeModulus, make_poly

    checks = []
    pm = find_prime_in_dyadic_interval(6)
    P = make_poly(
        4,
        {
            ((0, 1), (1, 1)): 3,
            ((2, 2),): 1,
            ((0, 1), (3, 1)): 5,
            (): 2,
        },
        pm,
    )
    C = sum_of_products_circuit(P)
    checks.append(("sop verify", verify_circuit(C, P, P.degree(), pm).accepted))
    point = [rng.randrange(pm.p) for _ in range(4)]
    checks.append(
        ("sop eval", circuit_evaluate(C, point)[0] == poly_eval(P, point))
    )
    H = homogenize(C, P.degree())
    checks.append(
        ("homogenize size", H.circuit.size() <= 9 * (P.degree() + 1) ** 2 * C.size())
    )
    return checks


def _selftest_formulations(rng) -> list:
    checks = []
    form = fm.formulate_hamiltonian_path(4, 2)
    checks.append(("ham-path s", form.s == 36))
    ok = True
    for _ in range(40):
        edges = [
            (u, v)
            for u in range(4)
            for v in range(4)
            if u != v and rng.random() < 0.4
        ]
        G = sv.digraph(4, edges)
        a = fm.assign_hamiltonian_path(G, 2)
        if fm.decide(form, a) != sv.hamiltonian_path(G):
            ok = False
    checks.append(("ham-path oracle x40", ok))
    return checks


def _selftest_pipeline(rng) -> list:
    import tempfile

    checks = []
    with tempfile.TemporaryDirectory() as tmp:
        paths = []
        for i in range(5):
            edges = [
                (u, v)
                for u in range(4)
                for v in range(4)
                if u != v and rng.random() < 0.5
            ]
            G = sv.digraph(4, edges)
            path = os.path.join(tmp, f"g{i}.txt")
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(sv.format_graph(G))
            paths.append((path, sv.hamiltonian_path(G)))
        import io
        from contextlib import redirect_stdout

        buf = io.StringIO()
        with redirect_stdout(buf):
            code = _cmd_pipeline(
                argparse.Namespace(
                    problem="ham-path",
                    args=[p for p, _ in paths],
                    theta=2,
                    circuit=None,
                    prime_policy="count",
                    jobs=1,
                )
            )
        checks.append(("pipeline exit", code == EXIT_OK))
        out = buf.getvalue()
        want = ["yes" if h else "no" for _, h in paths]
        got = [
            ln.rsplit("decision=", 1)[1]
            for ln in out.splitlines()
            if ln.startswith("instance ")
        ]
        checks.append(("pipeline decisions", got == want))
    return checks


_SCOPES = {
    "algebra": _selftest_algebra,
    "splitters": _selftest_splitters,
    "circuits": _selftest_circuits,
    "formulations": _selftest_formulations,
    "pipeline": _selftest_pipeline,
}


def _cmd_selftest(args) -> int:
    import random

    scopes = list(_SCOPES) if args.scope == "all" else [args.scope]
    for scope in scopes:
        if scope not in _SCOPES:
            raise _Usage(f"unknown selftest scope {scope!r}")
    failures = 0
    total = 0
    for scope in scopes:
        rng = random.Random(args.seed)
        checks = _SCOPES[scope](rng)
        for name, ok in checks:
            total += 1
            if not ok:
                failures += 1
                sys.stdout.write(f"FAIL {scope}: {name}\n")
    if failures:
        sys.stdout.write(f"selftest: {failures}/{total} checks failed\n")
        return EXIT_REJECT
    sys.stdout.write(f"selftest: {total} checks passed\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    top = _Parser(prog="polywit", description=__doc__)
    top.add_argument("--version", action="version", version=__version__)
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("formulate", parents=[], help="write a formulation bundle")
    p.add_argument("problem", choices=sorted(_PROBLEMS))
    p.add_argument("params", nargs="*", help="key=value parameters (n=, k=, t=, ...)")
    p.add_argument("--theta", type=int, default=None)
    p.add_argument("--out", default="bundle")
    p.set_defaults(func=_cmd_formulate)

    p = sub.add_parser("assign", help="map an instance to assignment bits")
    p.add_argument("problem", choices=sorted(_PROBLEMS))
    p.add_argument("instance", help="instance file")
    p.add_argument("params", nargs="*")
    p.add_argument("--theta", type=int, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_assign)

    p = sub.add_parser("decide", help="evaluate a bundle at an assignment")
    p.add_argument("bundle", help="bundle directory")
    p.add_argument("assignment", help="assignment file")
    p.set_defaults(func=_cmd_decide)

    p = sub.add_parser("circuit", help="netlist transforms")
    p.add_argument("action", choices=["build-sop", "verify", "homogenize", "eval"])
    p.add_argument("files", nargs="+")
    p.add_argument("--delta", type=int, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_circuit)

    p = sub.add_parser("splitter", help="build or verify splitter families")
    sact = p.add_subparsers(dest="action", required=True)
    b = sact.add_parser("build")
    b.add_argument("kind", choices=["code", "interval", "greedy", "compose"])
    b.add_argument("params", nargs="*")
    b.add_argument("--out", default=None)
    b.set_defaults(func=_cmd_splitter, action="build")
    v = sact.add_parser("verify")
    v.add_argument("family", help="splitter file")
    v.add_argument("--mode", choices=["injective", "even"], default=None)
    v.set_defaults(func=_cmd_splitter, action="verify")

    p = sub.add_parser("pipeline", help="formulate, verify, and solve instances")
    p.add_argument("problem", choices=sorted(_PROBLEMS))
    p.add_argument(
        "args", nargs="*",
        help="key=value parameters mixed with instance files",
    )
    p.add_argument("--theta", type=int, default=None)
    p.add_argument("--circuit", default=None, help="candidate netlist to verify")
    p.add_argument("--prime-policy", choices=["count", "svar"], default="count")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=_cmd_pipeline)

    p = sub.add_parser("selftest", help="run built-in checks")
    p.add_argument("scope", help="algebra|splitters|circuits|formulations|pipeline|all")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_selftest)

    return top


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else EXIT_OK
    try:
        return args.func(args)
    except _Usage as exc:
        sys.stderr.write(f"polywit: usage error: {exc}\n")
        return EXIT_USAGE
    except FileNotFoundError as exc:
        sys.stderr.write(f"polywit: cannot read {exc.filename}\n")
        return EXIT_MALFORMED
    except (FormatError, ArityError) as exc:
        sys.stderr.write(f"polywit: malformed input: {exc}\n")
        return EXIT_MALFORMED
    except (ParameterError, RingError) as exc:
        sys.stderr.write(f"polywit: parameter error: {exc}\n")
        return EXIT_PARAMETER


def run():  # console-script entry point
    raise SystemExit(main())


if __name__ == "__main__":
    run()
