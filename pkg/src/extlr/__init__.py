"""Extended LR(k) parsing on a graph-structured stack."""

from .grammar import Grammar, GrammarError, GrammarNotReduced, parse_grammar, gen_gn
from .firstk import compute_first_k, build_tables

__all__ = ["Grammar", "GrammarError", "GrammarNotReduced", "parse_grammar", "gen_gn",
           "compute_first_k", "build_tables"]
