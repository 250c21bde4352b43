"""Fair division of a single commodity over a bipartite supplier/demander network."""
from .core import (Allocation, Dominance, Flow, Problem, ProblemFormatError, format_rational,
                   lex_compare, lorenz_compare, node_allocation, parse_problem, to_rational)
from .edgefair import MechanismOutcome, edge_fair
from .egalitarian import egalitarian
from .flownet import Decomposition, decompose, fixed_edges, is_po_star, max_flow, max_flow_value
from .mechanisms import EdgeFair, Egalitarian, Hybrid, get_mechanism, hybrid_mechanism

__all__ = [
    "Allocation", "Decomposition", "Dominance", "EdgeFair", "Egalitarian", "Flow", "Hybrid",
    "MechanismOutcome", "Problem", "ProblemFormatError", "decompose", "edge_fair", "egalitarian",
    "fixed_edges", "format_rational", "get_mechanism", "hybrid_mechanism", "is_po_star",
    "lex_compare", "lorenz_compare", "max_flow", "max_flow_value", "node_allocation",
    "parse_problem", "to_rational",
]
