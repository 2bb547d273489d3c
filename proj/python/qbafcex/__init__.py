"""QBAF evaluation, counterfactual explanation and attribution."""

from ._core import (
    NonConvergenceError,
    Qbaf,
    QbafSchemaError,
    QbafSyntaxError,
    UnknownArgumentError,
    analyze_topic,
    check_validity,
    connectivity,
    difference_quotient,
    evaluate,
    evaluate_restricted,
    gen_cyclic,
    gen_tree,
    is_acyclic,
    lp_distance,
    make_qbaf,
    parse,
    polarity,
    priority,
    serialize,
    shapley_all,
    solve,
    trivial_counterfactual,
    with_base_scores,
)

__all__ = [
    "NonConvergenceError",
    "Qbaf",
    "QbafSchemaError",
    "QbafSyntaxError",
    "UnknownArgumentError",
    "analyze_topic",
    "check_validity",
    "connectivity",
    "difference_quotient",
    "evaluate",
    "evaluate_restricted",
    "gen_cyclic",
    "gen_tree",
    "is_acyclic",
    "lp_distance",
    "make_qbaf",
    "parse",
    "polarity",
    "priority",
    "serialize",
    "shapley_all",
    "solve",
    "trivial_counterfactual",
    "with_base_scores",
]
