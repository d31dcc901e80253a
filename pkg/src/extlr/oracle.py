"""Slow, independent reference procedures used to check the fast ones.

Nothing here shares code with the graph-based parsers beyond the grammar
model itself.
"""

from __future__ import annotations

from collections import deque
from functools import lru_cache
from itertools import product
from typing import Iterable, Sequence

from .grammar import Grammar

__all__ = [
    "Inconclusive", "DerivationTree", "earley_recognize", "earley_viable_prefix",
    "enumerate_derivations", "reduction_sequence", "replay_derivation",
    "enumerate_first_k", "count_lr0_states", "explore_mg", "graph_stacks", "nullable_symbols",
]


class Inconclusive(RuntimeError):
    """A search bound was hit before the answer was certain."""


def nullable_symbols(g: Grammar) -> set[int]:
    nullable: set[int] = set()
    changed = True
    while changed:
        changed = False
        for p in g.productions:
            if p.lhs.id not in nullable and all(s.id in nullable for s in p.rhs):
                nullable.add(p.lhs.id)
                changed = True
    return nullable


# ---------------------------------------------------------------- Earley

def _earley(g: Grammar, tokens: Sequence[int], start: int):
    """Earley chart with the Aycock–Horspool nullable fix.

    Items are ``(rhs, dot, origin, lhs)`` with ``rhs`` a tuple of symbol ids.
    """
    nullable = nullable_symbols(g)
    alts: dict[int, list[tuple[int, ...]]] = {}
    for p in g.productions:
        alts.setdefault(p.lhs.id, []).append(tuple(s.id for s in p.rhs))
    term = g.is_terminal
    top = ((start,), 0, 0, -1)
    chart = [set() for _ in range(len(tokens) + 1)]
    chart[0].add(top)
    for i in range(len(tokens) + 1):
        agenda = list(chart[i])
        while agenda:
            rhs, dot, origin, lhs = agenda.pop()
            if dot < len(rhs):
                x = rhs[dot]
                if term[x]:
                    if i < len(tokens) and tokens[i] == x:
                        chart[i + 1].add((rhs, dot + 1, origin, lhs))
                    continue
                for alt in alts.get(x, ()):
                    item = (alt, 0, i, x)
                    if item not in chart[i]:
                        chart[i].add(item)
                        agenda.append(item)
                if x in nullable:
                    item = (rhs, dot + 1, origin, lhs)
                    if item not in chart[i]:
                        chart[i].add(item)
                        agenda.append(item)
            else:
                for prhs, pdot, porigin, plhs in list(chart[origin]):
                    if pdot < len(prhs) and prhs[pdot] == lhs:
                        item = (prhs, pdot + 1, porigin, plhs)
                        if item not in chart[i]:
                            chart[i].add(item)
                            agenda.append(item)
    return chart, top


def earley_recognize(g: Grammar, tokens: Sequence[int], start: int | None = None) -> bool:
    start = g.start.id if start is None else start
    if g.is_terminal[start]:
        return list(tokens) == [start]
    chart, top = _earley(g, tokens, start)
    return (top[0], 1, 0, -1) in chart[len(tokens)]


def earley_viable_prefix(g: Grammar, tokens: Sequence[int], start: int | None = None) -> bool:
    """True when ``tokens`` is a prefix of some sentence derivable from ``start``."""
    start = g.start.id if start is None else start
    if g.is_terminal[start]:
        return list(tokens) in ([], [start])
    chart, _ = _earley(g, tokens, start)
    return bool(chart[len(tokens)])


# ---------------------------------------------------------------- derivations

class DerivationTree:
    __slots__ = ("production", "children")

    def __init__(self, production: int, children: tuple["DerivationTree", ...]):
        self.production = production
        self.children = children

    def postorder(self) -> list[int]:
        out: list[int] = []
        stack = [(self, False)]
        while stack:
            node, done = stack.pop()
            if done:
                out.append(node.production)
                continue
            stack.append((node, True))
            for c in reversed(node.children):
                stack.append((c, False))
        return out


def enumerate_derivations(g: Grammar, tokens: Sequence[int], cap: int = 64) -> list[DerivationTree]:
    """All parse trees of ``tokens`` (cyclic unit chains are cut), at most ``cap``."""
    tokens = tuple(tokens)
    term = g.is_terminal
    alts: dict[int, list] = {}
    for p in g.productions:
        alts.setdefault(p.lhs.id, []).append((p.index, tuple(s.id for s in p.rhs)))
    active: set[tuple[int, int, int]] = set()

    @lru_cache(maxsize=None)
    def split(rhs: tuple[int, ...], i: int, j: int) -> tuple[tuple[DerivationTree, ...], ...]:
        # every way of deriving tokens[i:j] from rhs; yields child tuples for nonterminals
        if not rhs:
            return ((),) if i == j else ()
        x, rest = rhs[0], rhs[1:]
        out = []
        if term[x]:
            if i < j and tokens[i] == x:
                out.extend(split(rest, i + 1, j))
            return tuple(out)
        for m in range(i, j + 1):
            heads = trees(x, i, m)
            if not heads:
                continue
            tails = split(rest, m, j)
            for h in heads:
                for t in tails:
                    out.append((h,) + t)
                    if len(out) > cap:
                        raise Inconclusive(f"more than {cap} derivations")
        return tuple(out)

    memo: dict[tuple[int, int, int], tuple[DerivationTree, ...]] = {}

    def trees(sym: int, i: int, j: int) -> tuple[DerivationTree, ...]:
        key = (sym, i, j)
        if key in memo:
            return memo[key]
        if key in active:
            return ()
        active.add(key)
        out = []
        for index, rhs in alts.get(sym, ()):
            for kids in split(rhs, i, j):
                out.append(DerivationTree(index, kids))
                if len(out) > cap:
                    raise Inconclusive(f"more than {cap} derivations")
        active.discard(key)
        memo[key] = tuple(out)
        return memo[key]

    result = list(trees(g.start.id, 0, len(tokens)))
    split.cache_clear()
    return result


def reduction_sequence(tree: DerivationTree) -> list[int]:
    """Production indices of the reversed rightmost derivation."""
    return tree.postorder()


def replay_derivation(g: Grammar, reductions: Sequence[int], tokens: Sequence[int]) -> bool:
    """Apply the reversed reduction list as a rightmost derivation from S."""
    by_index = {p.index: p for p in g.productions}
    form = [g.start.id]
    for idx in reversed(reductions):
        p = by_index.get(idx)
        if p is None:
            return False
        pos = next((i for i in range(len(form) - 1, -1, -1) if not g.is_terminal[form[i]]), None)
        if pos is None or form[pos] != p.lhs.id:
            return False
        form[pos:pos + 1] = [s.id for s in p.rhs]
    return form == list(tokens)


# ---------------------------------------------------------------- FIRST_k

def enumerate_first_k(g: Grammar, k: int) -> dict[int, frozenset]:
    """FIRST_k by brute force over all terminal strings of length at most k.

    A string shorter than k belongs to FIRST_k(X) iff X derives it; a string
    of length k belongs iff it is a prefix of something X derives.
    """
    terms = [s.id for s in g.terminals]
    out = {}
    for s in g.symbols:
        members = set()
        for n in range(k + 1):
            for w in product(terms, repeat=n):
                if n < k:
                    if earley_recognize(g, w, s.id):
                        members.add(w)
                elif earley_viable_prefix(g, w, s.id):
                    members.add(w)
        out[s.id] = frozenset(members)
    return out


# ---------------------------------------------------------------- LR(0)

def count_lr0_states(g: Grammar, cap: int = 100_000) -> int:
    """Number of states of the canonical LR(0) automaton (augmented grammar)."""
    rules = [(-1, (g.start.id,))] + [(p.lhs.id, tuple(s.id for s in p.rhs)) for p in g.productions]
    by_lhs: dict[int, list[int]] = {}
    for r, (lhs, _) in enumerate(rules):
        by_lhs.setdefault(lhs, []).append(r)

    def closure(items):
        result = set(items)
        todo = list(items)
        while todo:
            r, d = todo.pop()
            rhs = rules[r][1]
            if d < len(rhs):
                for r2 in by_lhs.get(rhs[d], ()):
                    if (r2, 0) not in result:
                        result.add((r2, 0))
                        todo.append((r2, 0))
        return frozenset(result)

    start = closure({(0, 0)})
    seen = {start}
    queue = deque([start])
    while queue:
        state = queue.popleft()
        moves: dict[int, set] = {}
        for r, d in state:
            rhs = rules[r][1]
            if d < len(rhs):
                moves.setdefault(rhs[d], set()).add((r, d + 1))
        for kernel in moves.values():
            nxt = closure(kernel)
            if nxt not in seen:
                seen.add(nxt)
                if len(seen) > cap:
                    raise Inconclusive(f"more than {cap} LR(0) states")
                queue.append(nxt)
    return len(seen)


# ---------------------------------------------------------------- automaton

def explore_mg(g: Grammar, tokens: Sequence[int], height: int, max_configs: int = 200_000) -> list[set]:
    """Stacks of the item pushdown automaton at each phase boundary.

    Returns, for phases 0..n, the set of stacks (tuples of ``(rule, dot)``
    with rule positions as in ``Grammar.rules``) of height at most ``height``
    whose top item is readable or the final item.  Stacks taller than
    ``height`` are not explored, so for recursive grammars the result is
    exact only for stacks that never need to exceed the bound.
    """
    rules = g.rules
    term = g.is_terminal
    alts = g.rule_alternatives()
    result = []
    current = {((0, 0),)}
    for i in range(len(tokens) + 1):
        seen = set(current)
        queue = deque(current)
        while queue:
            st = queue.popleft()
            r, d = st[-1]
            rhs = rules[r][1]
            succs = []
            if d < len(rhs) and not term[rhs[d]]:
                if len(st) < height:
                    succs = [st + ((r2, 0),) for r2 in alts[rhs[d]]]
            elif d == len(rhs) and len(st) > 1:
                r0, d0 = st[-2]
                succs = [st[:-2] + ((r0, d0 + 1),)]
            for s2 in succs:
                if s2 not in seen:
                    seen.add(s2)
                    if len(seen) > max_configs:
                        raise Inconclusive("configuration bound exceeded")
                    queue.append(s2)
        boundary = set()
        for st in seen:
            r, d = st[-1]
            rhs = rules[r][1]
            if (d < len(rhs) and term[rhs[d]]) or (r == 0 and d == 1):
                boundary.add(st)
        result.append(boundary)
        if i == len(tokens):
            break
        current = set()
        for st in boundary:
            r, d = st[-1]
            rhs = rules[r][1]
            if d < len(rhs) and rhs[d] == tokens[i]:
                current.add(st[:-1] + ((r, d + 1),))
    return result


def graph_stacks(graph, height: int) -> set:
    """Label sequences of root-to-end paths of an item graph, up to ``height``."""
    out = set()
    stack = [(r, ((r.rule, r.dot),)) for r in graph.roots.values()]
    while stack:
        node, labels = stack.pop()
        if node.succ is None:
            out.add(labels)
            continue
        if len(labels) >= height:
            continue
        for child in node.succ.succs.values():
            stack.append((child, labels + ((child.rule, child.dot),)))
    return out
