"""Design by contract for Architectural Design Rewriting (ADR) productions."""
from .contracts import (
    AssertedProduction, Bounds, Status, Verdict, check_soundness, check_triple,
    check_validity, check_weakest, semantic_precondition_oracle,
)
from .graph import EdgeType, Graph, Match, Production, apply_production, find_matches, validate_graph
from .logic import equivalent, enumerate_graphs, free_vars, nnf, satisfies, simplify
from .recovery import Plan, Style, applicable_productions, check_style, recover
from .wp import fwp_case, wdef, wp_transform, wpre

__version__ = "0.1.0"

__all__ = [
    "AssertedProduction",
    "Bounds",
    "Status",
    "Verdict",
    "check_soundness",
    "check_triple",
    "check_validity",
    "check_weakest",
    "semantic_precondition_oracle",
    "EdgeType",
    "Graph",
    "Match",
    "Production",
    "apply_production",
    "find_matches",
    "validate_graph",
    "equivalent",
    "enumerate_graphs",
    "free_vars",
    "nnf",
    "satisfies",
    "simplify",
    "Plan",
    "Style",
    "applicable_productions",
    "check_style",
    "recover",
    "fwp_case",
    "wdef",
    "wp_transform",
    "wpre",
]
