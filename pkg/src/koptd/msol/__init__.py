"""MSOL/CMSOL formulas over graphs: syntax, evaluation and a predicate library."""
from .ast import (BadConstants, Formula, FormulaTooLarge, SortError, Var, call, conj, disj,
                  exists, exists_in, forall, forall_in)
from .evaluate import (DEFAULT_BUDGET, BudgetExceeded, Evaluator, Structure, UnboundVariable,
                       check_budget, estimate_cost, evaluate, extract_relation, rewrite_virtual, structure,
                       union_graph, with_virtual_edges)
from .library import library, names
from .parser import SyntaxError, canonical, parse_formula, pretty, same_formula

__all__ = [
    "BadConstants", "BudgetExceeded", "DEFAULT_BUDGET", "Evaluator", "Formula",
    "FormulaTooLarge", "SortError", "Structure", "SyntaxError", "UnboundVariable", "Var",
    "call", "canonical", "check_budget", "conj", "disj", "estimate_cost", "evaluate", "exists", "exists_in",
    "extract_relation", "forall", "forall_in", "library", "names", "parse_formula", "pretty",
    "rewrite_virtual", "same_formula", "structure", "union_graph", "with_virtual_edges",
]
