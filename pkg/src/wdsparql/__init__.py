"""Approximation of well-designed SPARQL patterns by bounding OPT-depth."""

from .algebra import (
    And,
    Blank,
    Bound,
    Conj,
    Disj,
    EqConst,
    EqVar,
    Filter,
    Iri,
    Literal,
    Not,
    Opt,
    Select,
    Triple,
    Union,
    Var,
    bgp,
    is_af_pattern,
    is_opt_normal_form,
    opt_count,
    opt_depth,
    optional_parts,
    structural_equals,
    variables,
)
from .errors import (
    NotInOptNormalForm,
    NotWellDesigned,
    ParseError,
    ResourceLimit,
    ShapeInfeasible,
    UnsupportedNode,
)
from .normalform import to_opt_normal_form
from .oracle import brute_force_evaluate
from .semantics import Graph, Mapping, evaluate
from .surface import parse_ntriples, parse_pattern, print_pattern
from .wdtree import (
    build_tree,
    k_approximate,
    k_approximation_tree,
    left_deep_level_traversal,
    leftmost_leaf,
    leftmost_traversal,
    reductions,
    to_pattern,
)
from .wellformed import check_safe, check_well_designed

__version__ = "0.1.0"

__all__ = [
    "And",
    "Blank",
    "Bound",
    "Conj",
    "Disj",
    "EqConst",
    "EqVar",
    "Filter",
    "Iri",
    "Literal",
    "Not",
    "Opt",
    "Select",
    "Triple",
    "Union",
    "Var",
    "bgp",
    "is_af_pattern",
    "is_opt_normal_form",
    "opt_count",
    "opt_depth",
    "optional_parts",
    "structural_equals",
    "variables",
    "NotInOptNormalForm",
    "NotWellDesigned",
    "ParseError",
    "ResourceLimit",
    "ShapeInfeasible",
    "UnsupportedNode",
    "build_tree",
    "k_approximate",
    "k_approximation_tree",
    "left_deep_level_traversal",
    "leftmost_leaf",
    "leftmost_traversal",
    "reductions",
    "to_pattern",
    "to_opt_normal_form",
    "brute_force_evaluate",
    "Graph",
    "Mapping",
    "evaluate",
    "parse_ntriples",
    "parse_pattern",
    "print_pattern",
    "check_safe",
    "check_well_designed",
]
