import pytest
from hypothesis import given, settings, strategies as st

from corpus import LR_CORPUS, NON_LR, load

from extlr.firstk import (
    EPS, LookaheadTrie, StrategyError, Trie, build_tables, compute_first_k, first_k_concat,
    first_k_of_string, format_first_sets, precompute_prefix_tables, relevant_lookaheads, step_lengths,
)
from extlr.grammar import gen_gn, parse_grammar
from extlr.oracle import enumerate_first_k

ANBN = "%start S\n%tokens a b\nS : a S b | ;\n"


def firsts(g, k, name):
    return compute_first_k(g, k).first[g[name].id]


def test_anbn_first_sets():
    g = parse_grammar(ANBN)
    a, b = g["a"].id, g["b"].id
    assert firsts(g, 0, "S") == {EPS}
    assert firsts(g, 1, "S") == {EPS, (a,)}
    assert firsts(g, 2, "S") == {EPS, (a, a), (a, b)}
    assert firsts(g, 3, "S") == {EPS, (a, a, a), (a, a, b), (a, b)}


def test_terminal_first_is_itself():
    g = parse_grammar(ANBN)
    assert firsts(g, 2, "a") == {(g["a"].id,)}
    assert firsts(g, 0, "a") == {EPS}


def test_concat_truncates():
    assert first_k_concat({(1,), EPS}, {(2, 3)}, 2) == {(1, 2), (2, 3)}
    assert first_k_concat({(1, 1)}, {(2,)}, 2) == {(1, 1)}


def test_first_of_string():
    g = parse_grammar(ANBN)
    t = compute_first_k(g, 2)
    a, b = g["a"].id, g["b"].id
    assert first_k_of_string([g["S"].id, b], t) == {(b,), (a, a), (a, b)}
    assert first_k_of_string([], t) == {EPS}


@pytest.mark.parametrize("name", [e.name for e in LR_CORPUS + NON_LR])
@pytest.mark.parametrize("k", [0, 1, 2, 3])
def test_matches_brute_force(name, k):
    g = load(name)
    assert compute_first_k(g, k).first == enumerate_first_k(g, k)


def test_dump_format():
    g = parse_grammar(ANBN)
    assert format_first_sets(compute_first_k(g, 2)).splitlines() == [
        "FIRST2(a) = { a }",
        "FIRST2(b) = { b }",
        "FIRST2(S) = { a a, a b, eps }",
    ]


def test_relevant_lookaheads_cover_anbn():
    g = parse_grammar(ANBN)
    a, b = g["a"].id, g["b"].id
    assert relevant_lookaheads(g, 1) == {EPS, (a,), (b,)}


def test_trie_back_links_and_deepest():
    t = Trie([(1,), (1, 2, 3), EPS])
    node = t.find((1, 2))
    assert node is not None and not node.accepting
    assert [n.depth for n in t.accepting_chain(node)] == [1, 0]
    assert t.deepest((1, 2, 4)).depth == 2
    assert t.members() == {(1,), (1, 2, 3), EPS}
    assert t.find((2,)) is None


def test_lookahead_trie_links_point_at_maximal_prefix():
    tries = {7: Trie([(1,), (3,)])}
    la = LookaheadTrie([(1, 2), (3, 1)], tries)
    v = la.find((1, 2))
    assert la.link(v, 0, 7).depth == 1
    assert la.link(v, 1, 7).depth == 0


# the three example transitions for u = ab
@pytest.mark.parametrize("first_x, q, expected", [
    ({(1, 2)}, 0, (set(), True)),
    ({(1,), (3,)}, 0, ({1}, False)),
    ({(2,)}, 1, (set(), True)),
])
def test_step_lengths_examples(first_x, q, expected):
    assert step_lengths((1, 2), 2, q, first_x) == expected


def test_table_limit():
    g = parse_grammar(ANBN)
    with pytest.raises(StrategyError):
        precompute_prefix_tables(compute_first_k(g, 4), max_k=3)
    with pytest.raises(StrategyError):
        build_tables(g, 1, "bogus")
    assert build_tables(g, 4).prefix_table is None


def test_element_count_gn_k0():
    for n in (1, 2, 5):
        t = build_tables(gen_gn(n), 0, "table")
        assert t.element_count() == 6 * n * n + 8 * n + 3


@settings(max_examples=60, deadline=None)
@given(
    u=st.lists(st.integers(0, 2), min_size=0, max_size=3),
    members=st.sets(st.lists(st.integers(0, 2), max_size=3).map(tuple), min_size=1, max_size=6),
    q=st.integers(0, 3),
)
def test_trie_walk_matches_reference(u, members, q):
    # the trie-based advance must agree with the set-based reference
    from extlr.extparser import advance_lookahead_trie
    from extlr.firstk import FirstKTables

    k = 3
    u = tuple(u)
    q = min(q, len(u) if len(u) < k else k - 1)
    members = {m[:k] for m in members}
    tries = {9: Trie(members)}
    la = LookaheadTrie([u], tries)
    tables = FirstKTables(grammar=None, k=k, first={}, lookaheads=frozenset([u]), tries=tries,
                          lookahead_trie=la)
    got = advance_lookahead_trie(u, k, q, 9, tables, la.find(u))
    assert got == step_lengths(u, k, q, members)
