"""Shared test grammars and input sets."""

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from pathlib import Path

from extlr.grammar import Grammar, gen_gn, parse_grammar

GRAMMAR_DIR = Path(__file__).parent / "grammars"


@dataclass(frozen=True)
class Entry:
    name: str
    k: int  # smallest k for which the grammar is LR(k)
    max_len: int  # inputs of every length up to this are tried

    @property
    def grammar(self) -> Grammar:
        return load(self.name)


# Every entry yields at least 10^4 inputs or covers all inputs of length <= 10.
LR_CORPUS = [
    Entry("anbn", 1, 10),
    Entry("lr2", 2, 10),
    Entry("lr3", 3, 10),
    Entry("G1", 0, 10),
    Entry("G2", 0, 7),
    Entry("chain", 1, 10),
    Entry("leftrec", 1, 10),
    Entry("nullable", 1, 8),
    Entry("expr", 1, 6),
]

NON_LR = [Entry("ambiguous", 1, 10), Entry("cyclic", 1, 10)]


@lru_cache(maxsize=None)
def load(name: str) -> Grammar:
    if name.startswith("G") and name[1:].isdigit():
        return gen_gn(int(name[1:]))
    return parse_grammar((GRAMMAR_DIR / f"{name}.g").read_text())


def inputs(g: Grammar, max_len: int):
    terms = [s.id for s in g.terminals]
    for n in range(max_len + 1):
        yield from product(terms, repeat=n)


def count_inputs(g: Grammar, max_len: int) -> int:
    t = len(g.terminals)
    return sum(t ** n for n in range(max_len + 1))
