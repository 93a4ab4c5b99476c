"""Relational operators and law checkers for finite algebras.

Relations on a finite carrier are packed into machine integers; on top of
that sit congruence generation, compatible closure, alternating joins,
verifiers for four composition/join laws, a 4-generated-subsquare
hypothesis checker with witness-chain extraction, and a small quantified
statement language.
"""

from .algebra import (
    FiniteAlgebra,
    Operation,
    SubSquare,
    Subuniverse,
    algebra_to_json,
    generate_subuniverse,
    load_algebra,
    pair_code,
    pair_decode,
    product_relation,
    square,
    subsquare,
)
from .corpus import builtin, builtin_names
from .dsl import (
    ParseError,
    Statement,
    THEOREM_STATEMENTS,
    check_statement,
    evaluate,
    parse,
    print_statement,
)
from .relations import (
    BinRel,
    Partition,
    RelationFlags,
    cg,
    classify,
    compatible_closure,
    enumerate_congruences,
    enumerate_tolerances,
    is_congruence,
    random_reflexive,
    rel_plus,
    relation_from_json,
    relation_to_json,
)
from .theorems import (
    ChainFailure,
    CheckReport,
    Violation,
    WitnessChain,
    check_hypothesis,
    check_modularity_subsquares,
    replay,
    search_counterexample,
    sweep,
    sweep_iter,
    verify_rr,
    verify_subrel,
    verify_subrelpiu,
    verify_wtip,
    witness_chain,
)

__version__ = "0.1.0"

__all__ = [
    "BinRel",
    "ChainFailure",
    "CheckReport",
    "FiniteAlgebra",
    "Operation",
    "ParseError",
    "Partition",
    "RelationFlags",
    "Statement",
    "SubSquare",
    "Subuniverse",
    "THEOREM_STATEMENTS",
    "Violation",
    "WitnessChain",
    "algebra_to_json",
    "builtin",
    "builtin_names",
    "cg",
    "check_hypothesis",
    "check_modularity_subsquares",
    "check_statement",
    "classify",
    "compatible_closure",
    "enumerate_congruences",
    "enumerate_tolerances",
    "evaluate",
    "generate_subuniverse",
    "is_congruence",
    "load_algebra",
    "pair_code",
    "pair_decode",
    "parse",
    "print_statement",
    "product_relation",
    "random_reflexive",
    "rel_plus",
    "relation_from_json",
    "relation_to_json",
    "replay",
    "search_counterexample",
    "square",
    "subsquare",
    "sweep",
    "sweep_iter",
    "verify_rr",
    "verify_subrel",
    "verify_subrelpiu",
    "verify_wtip",
    "witness_chain",
]
