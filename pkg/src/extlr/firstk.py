"""FIRST_k sets and the lookahead machinery built on them.

Terminal strings are tuples of terminal ids.  A member of a FIRST_k set that is
shorter than ``k`` is always a complete derivation; members of length ``k`` may
be prefixes of longer strings.  Truncating concatenation therefore preserves
the convention on its own.

Two interchangeable lookahead strategies are provided for the parser:

* ``table``: for every relevant lookahead ``u``, nonterminal ``X`` and set
  ``U`` of proper prefix lengths of ``u`` (a bit mask, bit ``l`` meaning the
  prefix of length ``l``), the resulting mask and the source bits are stored.
* ``trie``: a trie ``T_k(X)`` per nonterminal with back-links to the deepest
  accepting proper ancestor, plus a trie over the relevant lookaheads whose
  nodes link into every ``T_k(X)`` at the maximal common prefix.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from itertools import product
from typing import Iterable, Sequence

from .grammar import Grammar

__all__ = [
    "TerminalString",
    "FirstKSet",
    "Trie",
    "TrieNode",
    "LookaheadTrie",
    "PrefixTransitionTable",
    "FirstKTables",
    "StrategyError",
    "DEFAULT_TABLE_MAX_K",
    "first_k_concat",
    "compute_first_k",
    "first_k_of_string",
    "relevant_lookaheads",
    "build_tries",
    "precompute_prefix_tables",
    "build_tables",
    "step_lengths",
    "format_first_sets",
]

TerminalString = tuple[int, ...]
FirstKSet = frozenset  # of TerminalString

DEFAULT_TABLE_MAX_K = 3
EPS: TerminalString = ()


class StrategyError(ValueError):
    """The requested lookahead strategy cannot be used with these tables."""


def first_k_concat(a: Iterable[TerminalString], b: Iterable[TerminalString], k: int) -> FirstKSet:
    """``{(xy)[:k] | x in a, y in b}``."""
    b = list(b)
    out = set()
    for x in a:
        if len(x) >= k:
            out.add(x[:k])
            continue
        for y in b:
            out.add((x + y)[:k])
    return frozenset(out)


@dataclass
class TrieNode:
    depth: int
    children: dict[int, "TrieNode"] = field(default_factory=dict)
    accepting: bool = False
    back_link: "TrieNode | None" = None
    id: int = 0

    def string(self, parent_map) -> TerminalString:
        out = []
        node = self
        while node.depth:
            parent, sym = parent_map[node.id]
            out.append(sym)
            node = parent
        return tuple(reversed(out))


class Trie:
    """A trie over terminal strings; ``find`` returns the node for a string or None."""

    def __init__(self, strings: Iterable[TerminalString] = ()):
        self.root = TrieNode(0)
        self.nodes = [self.root]
        self._parent: dict[int, tuple[TrieNode, int]] = {}
        for s in sorted(set(strings)):
            self.insert(s)
        self._link()

    def insert(self, s: TerminalString) -> TrieNode:
        node = self.root
        for sym in s:
            nxt = node.children.get(sym)
            if nxt is None:
                nxt = TrieNode(node.depth + 1, id=len(self.nodes))
                self.nodes.append(nxt)
                self._parent[nxt.id] = (node, sym)
                node.children[sym] = nxt
            node = nxt
        node.accepting = True
        return node

    def _link(self):
        # nodes are appended parent-first, so one forward pass suffices
        for node in self.nodes[1:]:
            parent, _ = self._parent[node.id]
            node.back_link = parent if parent.accepting else parent.back_link

    def find(self, s: Sequence[int]) -> TrieNode | None:
        node = self.root
        for sym in s:
            node = node.children.get(sym)
            if node is None:
                return None
        return node

    def deepest(self, s: Sequence[int]) -> TrieNode:
        """The node of the longest prefix of ``s`` present in the trie."""
        node = self.root
        for sym in s:
            nxt = node.children.get(sym)
            if nxt is None:
                break
            node = nxt
        return node

    def string(self, node: TrieNode) -> TerminalString:
        return node.string(self._parent)

    def members(self) -> set[TerminalString]:
        return {self.string(n) for n in self.nodes if n.accepting}

    def accepting_chain(self, node: TrieNode) -> Iterable[TrieNode]:
        """``node`` itself when accepting, then its back-link chain."""
        if node.accepting:
            yield node
        node = node.back_link
        while node is not None:
            yield node
            node = node.back_link

    def __len__(self):
        return len(self.nodes)


class LookaheadTrie(Trie):
    """Trie over lookahead strings with per-node links into every ``T_k(A)``.

    ``links[(v.id, i, A)]`` is the node ``w`` of ``T_k(A)`` where ``s(w)`` is
    the maximal common prefix of ``s(v)[i:]`` and the members of FIRST_k(A).
    Links are stored for ``0 <= i < depth(v)``.
    """

    def __init__(self, strings: Iterable[TerminalString], tries: dict[int, Trie]):
        super().__init__(strings)
        self.links: dict[tuple[int, int, int], TrieNode] = {}
        for v in self.nodes:
            s = self.string(v)
            for i in range(v.depth):
                for a, t in tries.items():
                    self.links[(v.id, i, a)] = t.deepest(s[i:])

    def link(self, v: TrieNode, i: int, a: int) -> TrieNode:
        return self.links[(v.id, i, a)]


@dataclass(frozen=True)
class PrefixTransitionTable:
    """``entries[(u, mask, X)] = (result_mask, sources, full_sources)``.

    ``sources[i]`` lists the bits of ``mask`` from which result bit ``i`` was
    reached; ``full_sources`` lists the bits from which the whole of ``u``
    became derivable (only when ``len(u) == k``).
    """

    k: int
    entries: dict

    def lookup(self, u: TerminalString, mask: int, sym: int):
        return self.entries[(u, mask, sym)]

    def __len__(self):
        return len(self.entries)


@dataclass(frozen=True)
class FirstKTables:
    grammar: Grammar
    k: int
    first: dict[int, FirstKSet]
    lookaheads: frozenset = frozenset()
    tries: dict[int, Trie] | None = None
    lookahead_trie: LookaheadTrie | None = None
    prefix_table: PrefixTransitionTable | None = None

    def element_count(self) -> int:
        """Static parser size: items, trie nodes, trie links, and table entries."""
        items = sum(len(rhs) + 1 for _, rhs in self.grammar.rules)
        tries = sum(len(t) for t in self.tries.values()) if self.tries else 0
        la = len(self.lookahead_trie) + len(self.lookahead_trie.links) if self.lookahead_trie else 0
        table = len(self.prefix_table) if self.prefix_table else 0
        return items + tries + la + table


def compute_first_k(g: Grammar, k: int) -> FirstKTables:
    """FIRST_k for every symbol by fixed-point iteration over the productions."""
    if k < 0:
        raise ValueError("k must be non-negative")
    first: dict[int, set[TerminalString]] = {}
    for s in g.symbols:
        first[s.id] = {(s.id,)[:k]} if s.terminal else set()
    changed = True
    while changed:
        changed = False
        for p in g.productions:
            acc: frozenset = frozenset({EPS})
            for s in p.rhs:
                if not acc:
                    break
                acc = first_k_concat(acc, first[s.id], k)
            new = acc - first[p.lhs.id]
            if new:
                first[p.lhs.id] |= new
                changed = True
    return FirstKTables(g, k, {a: frozenset(v) for a, v in first.items()})


def first_k_of_string(seq: Iterable[int], tables: FirstKTables) -> FirstKSet:
    acc: frozenset = frozenset({EPS})
    for s in seq:
        acc = first_k_concat(acc, tables.first[s], tables.k)
    return acc


def relevant_lookaheads(g: Grammar, k: int, tables: FirstKTables | None = None) -> frozenset:
    """Every lookahead the parser can meet on a sentence of ``L(G)``.

    A lookahead at position ``i`` of a sentence is ``FIRST_k`` of the rest of
    the sentence; the leaf at ``i`` sits in some right side ``A → αβ`` with
    ``β`` starting at it, so the lookahead lies in ``FIRST_k(β)·FOLLOW_k(A)``.
    End of input contributes ``ε``.
    """
    if tables is None:
        tables = compute_first_k(g, k)
    first = tables.first
    follow: dict[int, set] = {s.id: set() for s in g.nonterminals}
    follow[g.start.id].add(EPS)
    changed = True
    while changed:
        changed = False
        for p in g.productions:
            for pos, s in enumerate(p.rhs):
                if s.terminal:
                    continue
                tail = first_k_of_string((x.id for x in p.rhs[pos + 1:]), tables)
                new = first_k_concat(tail, follow[p.lhs.id], k) - follow[s.id]
                if new:
                    follow[s.id] |= new
                    changed = True
    out = {EPS}
    for p in g.productions:
        for pos in range(len(p.rhs)):
            beta = first_k_of_string((x.id for x in p.rhs[pos:]), tables)
            out |= first_k_concat(beta, follow[p.lhs.id], k)
    return frozenset(out)


def step_lengths(u: TerminalString, k: int, q: int, first_x: Iterable[TerminalString]):
    """Advance one prefix length ``q`` of ``u`` over a symbol with the given FIRST_k.

    Returns ``(lengths, full)``: the new prefix lengths of ``u`` derivable
    after the symbol, and whether all of ``u`` (of length ``k``) now is.
    Reference implementation used to build tables and to cross-check tries.
    """
    rest = u[q:]
    lengths = set()
    full = False
    for w in first_x:
        if len(u) == k and len(w) >= len(rest) and w[:len(rest)] == rest:
            full = True
        elif len(w) < k and q + len(w) <= len(u) and rest[:len(w)] == w:
            if not (len(u) == k and q + len(w) == k):
                lengths.add(q + len(w))
    return lengths, full


def _valid_lengths(u: TerminalString, k: int) -> list[int]:
    # proper prefixes when u is a full-length lookahead; all prefixes otherwise
    return list(range(k)) if len(u) == k else list(range(len(u) + 1))


def build_tries(tables: FirstKTables, lookaheads: Iterable[TerminalString] | None = None) -> FirstKTables:
    g = tables.grammar
    if lookaheads is None:
        lookaheads = tables.lookaheads or relevant_lookaheads(g, tables.k, tables)
    lookaheads = frozenset(lookaheads)
    tries = {s.id: Trie(tables.first[s.id]) for s in g.nonterminals}
    return replace(tables, lookaheads=lookaheads, tries=tries,
                   lookahead_trie=LookaheadTrie(lookaheads, tries))


def precompute_prefix_tables(tables: FirstKTables, max_k: int = DEFAULT_TABLE_MAX_K) -> FirstKTables:
    k = tables.k
    if k > max_k:
        raise StrategyError(f"prefix tables are limited to k <= {max_k} (k={k}); use the trie strategy")
    g = tables.grammar
    lookaheads = tables.lookaheads or relevant_lookaheads(g, k, tables)
    entries = {}
    for u in lookaheads:
        valid = _valid_lengths(u, k)
        per_bit = {}
        for s in g.nonterminals:
            for q in valid:
                per_bit[(s.id, q)] = step_lengths(u, k, q, tables.first[s.id])
        for bits in product((0, 1), repeat=len(valid)):
            mask = sum(1 << q for q, b in zip(valid, bits) if b)
            for s in g.nonterminals:
                result = 0
                sources: dict[int, list[int]] = {}
                full_sources = []
                for q in valid:
                    if not mask >> q & 1:
                        continue
                    lengths, full = per_bit[(s.id, q)]
                    for i in lengths:
                        result |= 1 << i
                        sources.setdefault(i, []).append(q)
                    if full:
                        full_sources.append(q)
                entries[(u, mask, s.id)] = (result, {i: tuple(v) for i, v in sources.items()},
                                            tuple(full_sources))
    return replace(tables, lookaheads=frozenset(lookaheads),
                   prefix_table=PrefixTransitionTable(k, entries))


def build_tables(g: Grammar, k: int, strategy: str | None = None,
                 max_table_k: int = DEFAULT_TABLE_MAX_K) -> FirstKTables:
    """FIRST_k sets plus the structures ``strategy`` needs (both when None)."""
    tables = compute_first_k(g, k)
    tables = replace(tables, lookaheads=relevant_lookaheads(g, k, tables))
    if strategy in (None, "trie"):
        tables = build_tries(tables)
    if strategy == "table" or (strategy is None and k <= max_table_k):
        tables = precompute_prefix_tables(tables, max_table_k)
    if strategy not in (None, "trie", "table"):
        raise StrategyError(f"unknown strategy {strategy!r}")
    return tables


def format_first_sets(tables: FirstKTables) -> str:
    """One ``FIRSTk(X) = { ... }`` line per symbol, in id order."""
    g = tables.grammar
    names = [s.name for s in g.symbols]
    lines = []
    for s in g.symbols:
        strings = sorted(" ".join(names[t] for t in w) if w else "eps" for w in tables.first[s.id])
        lines.append(f"FIRST{tables.k}({s.name}) = {{ {', '.join(strings)} }}")
    return "\n".join(lines)
