"""Deterministic LR(k) parsing on the item graph.

Each step first expands every expansible end node, using only alternatives
that can start with the next token.  Then a backwards search over the graph
determines, for every end node, whether the lookahead ``u`` (the next ``k``
tokens) is in FIRST_k of the stack contents above it.  For an LR(k) grammar
at most one kind of step is valid: reduce one item, read the next token, or
accept.  Anything else is reported as a conflict.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

from .firstk import FirstKTables, StrategyError, build_tables
from .grammar import Grammar, require_reduced
from .graph import READABLE, REDUCIBLE, ItemGraph, ItemNode
from .simulation import expansion_round

__all__ = [
    "ParseError", "LRConflict", "CommonPrefixViolation", "Derivation", "StepDecision", "SearchState",
    "ParseStats", "ext_parse", "decide_step", "reversed_topological_search",
    "advance_lookahead_table", "advance_lookahead_trie", "apply_reduce", "apply_read",
    "check_common_prefix",
]


class ParseError(Exception):
    """The input is not in the language."""

    def __init__(self, position: int, expected: Sequence[str]):
        self.position = position
        self.expected = list(expected)
        super().__init__(f"syntax error at token {position}: expected {{{', '.join(self.expected)}}}")


class LRConflict(Exception):
    """Two different steps were valid at once, so the grammar is not LR(k)."""

    def __init__(self, k: int, diagnostic: str):
        self.k = k
        self.diagnostic = diagnostic
        super().__init__(f"not LR({k}): {diagnostic}")


class CommonPrefixViolation(AssertionError):
    """Two root-to-end paths spell different viable prefixes."""


@dataclass
class ParseStats:
    nodes: int = 0
    edges: int = 0
    searches: int = 0
    search_visits: int = 0
    steps: int = 0
    prefix_checks: int = 0

    @property
    def insertions(self) -> int:
        return self.nodes + self.edges

    def line(self) -> str:
        return (f"stats nodes={self.nodes} edges={self.edges} "
                f"searches={self.searches} search_visits={self.search_visits}")


@dataclass
class Derivation:
    productions: list[int]
    stats: ParseStats = field(default_factory=ParseStats)

    @property
    def ld(self) -> int:
        return len(self.productions)

    def __iter__(self):
        return iter(self.productions)


@dataclass
class StepDecision:
    kind: str  # "reduce", "read", "accept", "reject" or "conflict"
    nodes: list[ItemNode] = field(default_factory=list)
    rule: int | None = None
    detail: str = ""


@dataclass
class SearchState:
    """Per-node prefix records: ``bits[node_id][end_id]`` is a bit mask of prefix lengths."""

    u: tuple[int, ...]
    k: int
    bits: dict[int, dict[int, int]] = field(default_factory=dict)
    valid: set[int] = field(default_factory=set)
    visits: int = 0


# ---------------------------------------------------------------- lookahead steps

def _terminal_step(u, k, mask: int, x: int) -> tuple[int, bool]:
    out, full = 0, False
    q = 0
    while mask >> q:
        if mask >> q & 1 and q < len(u) and u[q] == x:
            if q + 1 == k:
                full = True
            else:
                out |= 1 << (q + 1)
        q += 1
    return out, full


def advance_lookahead_table(u, k, mask: int, x: int, tables: FirstKTables) -> tuple[int, bool]:
    """New prefix-length mask after symbol ``x``, and whether all of ``u`` is now derivable."""
    if tables.grammar.is_terminal[x]:
        return _terminal_step(u, k, mask, x)
    result, _, full_sources = tables.prefix_table.lookup(u, mask, x)
    return result, bool(full_sources)


def advance_lookahead_trie(u, k, q: int, x: int, tables: FirstKTables, cursor) -> tuple[set[int], bool]:
    """Prefix lengths reachable from length ``q`` over nonterminal ``x`` using trie links.

    ``cursor`` is the node of ``u`` in the lookahead trie.
    """
    trie = tables.tries[x]
    w = tables.lookahead_trie.link(cursor, q, x) if q < len(u) else trie.root
    full = len(u) == k and w.depth == len(u) - q
    lengths = set()
    for acc in trie.accepting_chain(w):
        d = acc.depth
        if d < k and not (len(u) == k and q + d == k):
            lengths.add(q + d)
    return lengths, full


class _Advancer:
    """Pushes a prefix-length mask through a symbol string with one strategy."""

    def __init__(self, u, k, tables: FirstKTables, strategy: str):
        self.u, self.k, self.tables, self.strategy = u, k, tables, strategy
        self.is_terminal = tables.grammar.is_terminal
        self.cursor = None
        self.known = u in tables.lookaheads
        if strategy == "trie" and self.known:
            self.cursor = tables.lookahead_trie.find(u)
            self.known = self.cursor is not None and self.cursor.accepting

    def run(self, mask: int, seq) -> tuple[int, bool]:
        full = False
        for x in seq:
            if not mask:
                break
            if self.is_terminal[x]:
                mask, f = _terminal_step(self.u, self.k, mask, x)
            elif self.strategy == "table":
                mask, f = advance_lookahead_table(self.u, self.k, mask, x, self.tables)
            else:
                out, f = 0, False
                q = 0
                while mask >> q:
                    if mask >> q & 1:
                        lengths, fq = advance_lookahead_trie(self.u, self.k, q, x, self.tables, self.cursor)
                        f = f or fq
                        for d in lengths:
                            out |= 1 << d
                    q += 1
                mask = out
            full = full or f
        return mask, full


# ---------------------------------------------------------------- search

def reversed_topological_search(graph: ItemGraph, u: tuple[int, ...], k: int,
                                tables: FirstKTables, strategy: str) -> SearchState:
    """Find the end nodes for which ``u`` is a valid lookahead.

    Prefix-length masks start at the end nodes and flow towards the roots.
    Crossing an item node towards its predecessor variable node keeps the
    mask; crossing a variable node into a predecessor item advances the mask
    over the rest of that item's right side.  A mask only ever grows, so
    each node is re-entered at most once per new bit, which bounds the work
    on closing edges of left-recursive cycles.
    """
    state = SearchState(u, k)
    adv = _Advancer(u, k, tables, strategy)
    if not adv.known:
        return state
    short = len(u) < k
    queue: deque = deque()

    def offer(node, tag: int, mask: int):
        rec = state.bits.setdefault(node.id, {})
        new = mask & ~rec.get(tag, 0)
        if new:
            rec[tag] = rec.get(tag, 0) | new
            queue.append((node, tag, new))

    for e in graph.end_nodes():
        rhs = graph.rules[e.rule][1]
        mask, full = adv.run(1, rhs[e.dot:])
        if full:
            state.valid.add(e.id)
        if mask:
            offer(e, e.id, mask)
    while queue:
        node, tag, mask = queue.popleft()
        state.visits += 1
        if tag in state.valid:
            continue
        if isinstance(node, ItemNode):
            if node.pred is None:
                if short and mask >> len(u) & 1:
                    state.valid.add(tag)
            else:
                offer(node.pred, tag, mask)
        else:
            for p in node.preds.values():
                m, full = adv.run(mask, graph.right_side(p))
                if full:
                    state.valid.add(tag)
                    break
                if m:
                    offer(p, tag, m)
    return state


# ---------------------------------------------------------------- steps

def _describe(graph: ItemGraph, node: ItemNode) -> str:
    g = graph.grammar
    lhs, rhs = graph.rules[node.rule]
    names = [g.symbols[s].name for s in rhs]
    left = "S'" if lhs < 0 else g.symbols[lhs].name
    body = " ".join(names[:node.dot] + ["."] + names[node.dot:])
    return f"[{left} -> {body}]"


def decide_step(graph: ItemGraph, u: tuple[int, ...], k: int, at_end: bool,
                tables: FirstKTables | None, strategy: str,
                stats: ParseStats | None = None) -> StepDecision:
    ends = graph.end_nodes()
    if not ends:
        return StepDecision("reject")
    if k == 0:
        valid = [e for e in ends if at_end or not graph.is_accept(e)]
    else:
        state = reversed_topological_search(graph, u, k, tables, strategy)
        if stats is not None:
            stats.searches += 1
            stats.search_visits += state.visits
        valid = [e for e in ends if e.id in state.valid]
    if not valid:
        return StepDecision("reject")
    reducible = [e for e in valid if graph.kind(e) == REDUCIBLE]
    readable = [e for e in valid if graph.kind(e) == READABLE]
    if len(reducible) > 1 or (reducible and readable):
        items = reducible + readable[:1]
        return StepDecision("conflict", items, detail=" vs ".join(_describe(graph, e) for e in items[:2]))
    if reducible:
        e = reducible[0]
        if graph.is_accept(e):
            return StepDecision("accept", [e])
        return StepDecision("reduce", [e], rule=e.rule)
    return StepDecision("read", readable)


def apply_reduce(graph: ItemGraph, decision: StepDecision) -> None:
    keep = {n.id for n in decision.nodes}
    graph.remove([e for e in graph.end_nodes() if e.id not in keep])
    graph.reduce(decision.nodes)


def apply_read(graph: ItemGraph, token: int, decision: StepDecision) -> None:
    graph.read(token, keep=decision.nodes)


END_MARK = "$"


@lru_cache(maxsize=16)
def _one_token_tables(g: Grammar) -> FirstKTables:
    return build_tables(g, 1, "trie")


def _continuations(graph: ItemGraph, g: Grammar) -> set:
    """Terminals (None for end of input) that some end node could accept next."""
    if not graph.ends:
        return set()
    tables = _one_token_tables(g)
    out = set()
    for t in [None] + [s.id for s in g.terminals]:
        u = () if t is None else (t,)
        if reversed_topological_search(graph, u, 1, tables, "trie").valid:
            out.add(t)
    return out


def check_common_prefix(graph: ItemGraph, limit: int = 1000) -> int:
    """Check that all root-to-end paths spell one viable prefix; returns paths seen."""
    first = None
    seen = 0
    for path in graph.paths(limit=limit, max_len=10 ** 9):
        seen += 1
        p = graph.pref(path)
        if first is None:
            first = p
        elif p != first:
            raise CommonPrefixViolation(f"paths disagree on viable prefix: {first} vs {p}")
    return seen


def _resolve_strategy(k: int, strategy: str | None, tables: FirstKTables | None) -> str:
    if strategy is None:
        return "table" if k <= 3 else "trie"
    if strategy not in ("table", "trie"):
        raise StrategyError(f"unknown strategy {strategy!r}")
    return strategy


def ext_parse(g: Grammar, tokens: Sequence[int], k: int = 1, strategy: str | None = None,
              tables: FirstKTables | None = None, debug: bool = False,
              check: bool = True) -> Derivation:
    """Parse ``tokens`` (terminal ids) and return the reversed rightmost derivation.

    Raises ``ParseError`` when the input is rejected and ``LRConflict`` when
    two steps are valid at once.  ``debug`` checks the common-prefix
    invariant before every step.
    """
    if check:
        require_reduced(g)
    strategy = _resolve_strategy(k, strategy, tables)
    if k > 0:
        if tables is None or tables.k != k:
            tables = build_tables(g, k, strategy)
        elif strategy == "table" and tables.prefix_table is None:
            raise StrategyError("table strategy needs precomputed prefix tables")
        elif strategy == "trie" and tables.lookahead_trie is None:
            raise StrategyError("trie strategy needs lookahead tries")
    names = [s.name for s in g.symbols]
    graph = ItemGraph(g)
    graph.new_root()
    stats = ParseStats()
    out: list[int] = []
    index_of = [0] + [p.index for p in g.productions]
    n = len(tokens)
    pos = 0
    expected: set[int] = set()
    while True:
        a = tokens[pos] if pos < n else None
        expansion_round(graph, a, restrict=True)
        wrong = [e for e in graph.end_nodes() if graph.kind(e) == READABLE and graph.next_symbol(e) != a]
        for e in wrong:
            expected.add(graph.next_symbol(e))
        graph.remove(wrong)
        expected |= graph.blocked_terminals
        if debug and graph.ends:
            check_common_prefix(graph)
            stats.prefix_checks += 1
        u = tuple(tokens[pos:pos + k])
        decision = decide_step(graph, u, k, pos == n, tables, strategy, stats)
        stats.steps += 1
        if decision.kind == "conflict":
            raise LRConflict(k, f"{decision.detail} at token {pos + 1}")
        if decision.kind == "reject":
            expected |= _continuations(graph, g)
            shown = [names[t] for t in sorted(t for t in expected if t is not None)]
            if None in expected:
                shown.append(END_MARK)
            raise ParseError(pos + 1, shown)
        if decision.kind == "accept":
            break
        if decision.kind == "reduce":
            out.append(index_of[decision.rule])
            apply_reduce(graph, decision)
        else:
            apply_read(graph, a, decision)
            pos += 1
            expected = set()
    stats.nodes = graph.inserted_nodes
    stats.edges = graph.inserted_edges
    return Derivation(out, stats)
