"""Guarded first-order logic: satisfiability, query answering, bisimulation invariants and finite covers."""

from .bisim import are_guarded_bisimilar, invariant, ordered_invariant
from .core import Signature, Structure, parse_structure, format_structure
from .cover import CoverParams, build_cover
from .hyperanalysis import graham_reduce, is_acyclic, is_chordal, is_conformal
from .logic import model_check, parse_formula, parse_sentence, parse_tgds
from .queries import evaluate, parse_query, treeify
from .solver import answer_query, answer_query_database, canonise, gf_sat, small_model

__version__ = "0.1.0"

__all__ = [
    "Signature", "Structure", "parse_structure", "format_structure",
    "parse_formula", "parse_sentence", "parse_tgds", "model_check",
    "parse_query", "evaluate", "treeify",
    "graham_reduce", "is_acyclic", "is_chordal", "is_conformal",
    "invariant", "ordered_invariant", "are_guarded_bisimilar",
    "CoverParams", "build_cover",
    "gf_sat", "small_model", "answer_query", "answer_query_database", "canonise",
]
