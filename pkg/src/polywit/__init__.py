"""polywit: witness-counting polynomial formulations of hard problems,
verified arithmetic-circuit evaluation, and explicit splitter families."""

from .algebra import (
    PrimeModulus,
    SparsePolynomial,
    cantor_pair,
    find_prime_in_dyadic_interval,
    is_prime,
    make_poly,
    poly_add,
    poly_eval,
    poly_mul_truncated,
    reduce_mod,
)
from .circuits import (
    ArithmeticCircuit,
    VerifyResult,
    evaluate,
    expand,
    homogenize,
    make_circuit,
    sum_of_products_circuit,
    verify_circuit,
)
from .formulations import (
    Assignment,
    FormulationOutput,
    Legend,
    decide,
    param_index,
)
from .splitters import (
    Coloring,
    SplitterFamily,
    build_code_splitter,
    build_greedy_splitter,
    build_interval_splitter,
    build_kwise_family,
    compose_splitter,
    verify_splitter,
)

__all__ = [
    "ArithmeticCircuit",
    "Assignment",
    "Coloring",
    "FormulationOutput",
    "Legend",
    "PrimeModulus",
    "SparsePolynomial",
    "SplitterFamily",
    "VerifyResult",
    "build_code_splitter",
    "build_greedy_splitter",
    "build_interval_splitter",
    "build_kwise_family",
    "cantor_pair",
    "compose_splitter",
    "decide",
    "evaluate",
    "expand",
    "find_prime_in_dyadic_interval",
    "homogenize",
    "is_prime",
    "make_circuit",
    "make_poly",
    "param_index",
    "poly_add",
    "poly_eval",
    "poly_mul_truncated",
    "reduce_mod",
    "sum_of_products_circuit",
    "verify_circuit",
]

__version__ = "0.1.0"
