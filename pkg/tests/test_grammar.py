import pytest
from hypothesis import given, strategies as st

from extlr.grammar import (
    GrammarFormatError, GrammarNotReduced, check_reduced, format_grammar, gen_gn,
    parse_grammar, reduce_grammar, require_reduced,
)

ANBN = """
%start S
%tokens a b
S : a S b
  |          # empty
  ;
"""


def test_parse_numbers_productions_in_order():
    g = parse_grammar(ANBN)
    assert [p.index for p in g.productions] == [1, 2]
    assert [s.name for s in g.productions[0].rhs] == ["a", "S", "b"]
    assert g.productions[1].rhs == ()
    assert g.start.name == "S"
    assert [s.name for s in g.terminals] == ["a", "b"]


def test_size_counts_lhs_and_rhs():
    assert parse_grammar(ANBN).size == 5


def test_rules_prepend_augmented_start():
    g = parse_grammar(ANBN)
    assert g.rules[0] == (-1, (g.start.id,))
    assert len(g.rules) == 3


@pytest.mark.parametrize("text, fragment", [
    ("%tokens a\nS : a ;\n", "missing %start"),
    ("%start S\n%start S\n%tokens a\nS : a ;\n", "duplicate %start"),
    ("%start S\n%tokens a a\nS : a ;\n", "duplicate token"),
    ("%start S\n%tokens a\nS : a\n", "missing ';'"),
    ("%start S\n%tokens a\nS : b ;\n", "'b' is neither"),
    ("%start S\n%tokens a\na : a ;\nS : a ;\n", "used as a left-hand side"),
    ("%start a\n%tokens a\nS : a ;\n", "is a terminal"),
    ("%start T\n%tokens a\nS : a ;\n", "has no productions"),
    ("%start S\n%tokens a\nS : a $ ;\n", "unexpected character"),
    ("%start S\n%bogus a\nS : a ;\n", "unknown directive"),
])
def test_format_errors(text, fragment):
    with pytest.raises(GrammarFormatError) as info:
        parse_grammar(text)
    assert fragment in str(info.value)


def test_format_error_carries_position():
    with pytest.raises(GrammarFormatError) as info:
        parse_grammar("%start S\n%tokens a\nS : a b ;\n")
    assert (info.value.line, info.value.column) == (3, 7)


def test_tokens_may_span_several_lines():
    g = parse_grammar("%start S\n%tokens a\n%tokens b\nS : a b ;\n")
    assert [s.name for s in g.terminals] == ["a", "b"]


def test_round_trip_keeps_numbering():
    g = parse_grammar("%start S\n%tokens a b\nS : A | b ;\nA : a ;\nS : a A ;\n")
    again = parse_grammar(format_grammar(g))
    assert [(p.index, p.lhs.name, tuple(s.name for s in p.rhs)) for p in g.productions] == \
        [(p.index, p.lhs.name, tuple(s.name for s in p.rhs)) for p in again.productions]


def test_unreduced_grammar_is_named():
    g = parse_grammar("%start S\n%tokens a b\nS : a ;\nX : b ;\nY : Y ;\n")
    diag = check_reduced(g)
    assert not diag.reduced
    assert {s.name for s in diag.unreachable} >= {"X", "b"}
    assert "Y" in {s.name for s in diag.unproductive}
    with pytest.raises(GrammarNotReduced) as info:
        require_reduced(g)
    assert "X" in str(info.value)


def test_reduce_keeps_original_indices():
    g = parse_grammar("%start S\n%tokens a b\nX : b ;\nS : a | Y ;\nY : Y a ;\n")
    r = reduce_grammar(g)
    assert check_reduced(r).reduced
    assert [p.index for p in r.productions] == [2]
    assert [s.name for s in r.terminals] == ["a"]


def test_tokens_rejects_unknown_names():
    g = parse_grammar(ANBN)
    assert g.tokens(["a", "b"]) == [g["a"].id, g["b"].id]
    with pytest.raises(ValueError):
        g.tokens(["a", "S"])


@pytest.mark.parametrize("n, size", [(1, 12), (2, 36), (3, 72), (10, 660)])
def test_gn_size(n, size):
    assert gen_gn(n).size == size


def test_gn_shape():
    g = gen_gn(2)
    names = [(p.lhs.name, " ".join(s.name for s in p.rhs)) for p in g.productions]
    assert names[:2] == [("S", "A1"), ("S", "A2")]
    assert ("A1", "a2 A1") in names and ("A1", "a1 B1") in names and ("A1", "b1") in names
    assert ("B2", "a1 B2") in names and ("B2", "b2") in names
    assert check_reduced(g).reduced
    with pytest.raises(ValueError):
        gen_gn(0)


@given(st.integers(1, 12))
def test_gn_size_formula(n):
    g = gen_gn(n)
    assert g.size == 6 * n * n + 6 * n
    assert len(g.terminals) == 2 * n and len(g.nonterminals) == 2 * n + 1
