from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from corpus import load

from extlr.grammar import GrammarNotReduced, parse_grammar
from extlr.graph import ItemGraph
from extlr.oracle import earley_recognize, explore_mg, graph_stacks
from extlr.simulation import close_phase, simulate


def toks(g, text):
    return g.tokens(text.split())


def test_anbn_membership():
    g = load("anbn")
    assert simulate(g, toks(g, "a a b b"))
    assert simulate(g, [])
    assert not simulate(g, toks(g, "a b b"))


def test_ambiguous_grammar():
    g = load("ambiguous")
    assert [simulate(g, [0] * n) for n in range(5)] == [False, True, True, True, True]


def test_cyclic_grammar_terminates():
    g = load("cyclic")
    assert simulate(g, toks(g, "a b"))
    assert simulate(g, toks(g, "b b b"))
    assert not simulate(g, toks(g, "a"))


def test_rejects_unreduced():
    g = load("unreachable")
    with pytest.raises(GrammarNotReduced):
        simulate(g, [0])


def test_trace_has_one_line_per_phase():
    g = load("anbn")
    lines = []
    simulate(g, toks(g, "a b"), trace=lines.append)
    assert len(lines) == 3
    assert lines[0].startswith("phase=0 nodes=")
    assert all(" edges=" in x and " ends=" in x for x in lines)


def test_type2_copy_keeps_sibling():
    # after reducing A -> . the readable sibling [A -> . a] must survive
    g = parse_grammar("%start S\n%tokens a b\nS : A b ;\nA : a | ;\n")
    assert simulate(g, toks(g, "a b"))
    assert simulate(g, toks(g, "b"))


SMALL = ["anbn", "leftrec", "chain", "ambiguous", "cyclic", "nullable", "lr2"]


@pytest.mark.parametrize("name", SMALL)
def test_paths_equal_automaton_stacks(name):
    g = load(name)
    height = 5
    terms = [s.id for s in g.terminals]
    for n in range(4):
        for w in product(terms, repeat=n):
            expected = explore_mg(g, w, height + 12)
            graph = ItemGraph(g)
            graph.new_root()
            for i in range(n + 1):
                close_phase(graph)
                got = graph_stacks(graph, height)
                assert got == {s for s in expected[i] if len(s) <= height}, (w, i)
                if i == n or not graph.read(w[i]):
                    break


def test_node_count_bound():
    g = load("expr")
    items = sum(len(rhs) + 1 for _, rhs in g.rules)
    w = toks(g, "l x p x r t x p l l x r r")
    graph = ItemGraph(g)
    graph.new_root()
    for i in range(len(w) + 1):
        close_phase(graph)
        assert graph.node_count <= 2 * items + len(g.nonterminals)
        if i < len(w):
            graph.read(w[i])


@settings(max_examples=150, deadline=None)
@given(st.sampled_from(SMALL + ["expr", "G2"]), st.data())
def test_agrees_with_earley(name, data):
    g = load(name)
    w = data.draw(st.lists(st.sampled_from([s.id for s in g.terminals]), max_size=12))
    assert simulate(g, w, check=False) == earley_recognize(g, w)
