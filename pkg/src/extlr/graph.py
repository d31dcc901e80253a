"""The graph of simulated pushdown stores.

Item nodes carry a dotted rule and point to at most one variable node (the
nonterminal behind their dot once it has been expanded).  A variable node
``A_i`` fans out to the items ``[A → ·γ]_i`` created when ``A`` was first
expanded in phase ``i``; every item expanded on ``A`` in that phase shares it.
Each path from a root to an end node spells one stack of the pushdown
automaton, bottom to top.

Rules are addressed by their position in ``Grammar.rules``; rule 0 is the
augmented ``S' → S``.
"""

from __future__ import annotations

from collections import deque
from itertools import count
from typing import Iterable, Iterator

from .grammar import Grammar

__all__ = ["ItemNode", "VarNode", "ItemGraph", "EXPANSIBLE", "READABLE", "REDUCIBLE"]

EXPANSIBLE, READABLE, REDUCIBLE = "expansible", "readable", "reducible"


class ItemNode:
    __slots__ = ("id", "rule", "dot", "phase", "pred", "succ", "alive")

    def __init__(self, id, rule, dot, phase, pred):
        self.id = id
        self.rule = rule
        self.dot = dot
        self.phase = phase
        self.pred: VarNode | None = pred
        self.succ: VarNode | None = None
        self.alive = True

    def __repr__(self):
        return f"<item {self.id} r{self.rule}.{self.dot}@{self.phase}>"


class VarNode:
    __slots__ = ("id", "sym", "phase", "preds", "succs", "alive", "completed")

    def __init__(self, id, sym, phase):
        self.id = id
        self.sym = sym
        self.phase = phase
        self.preds: dict[int, ItemNode] = {}
        self.succs: dict[int, ItemNode] = {}
        self.alive = True
        self.completed = False

    def __repr__(self):
        return f"<var {self.id} s{self.sym}@{self.phase}>"


class ItemGraph:
    """Graph-structured stack for one parse session.

    ``phase`` is the number of input tokens read so far.  Nodes created or
    advanced in a phase are deduplicated on ``(rule, dot, pred, phase)``, so a
    stack reached twice is represented once.
    """

    def __init__(self, grammar: Grammar):
        self.grammar = grammar
        self.rules = grammar.rules
        self.is_terminal = grammar.is_terminal
        self.alts = grammar.rule_alternatives()
        self.phase = 0
        self._ids = count()
        self.roots: dict[int, ItemNode] = {}
        self.ends: dict[int, ItemNode] = {}
        self._vars: dict[int, VarNode] = {}
        self._keys: dict[tuple, ItemNode] = {}
        self.node_count = 0
        self.edge_count = 0
        self.inserted_nodes = 0
        self.inserted_edges = 0
        # first symbols of alternatives skipped by restricted expansion, for error messages
        self.blocked_terminals: set[int] = set()

    # ------------------------------------------------------------ basics

    def kind(self, node: ItemNode) -> str:
        rhs = self.rules[node.rule][1]
        if node.dot == len(rhs):
            return REDUCIBLE
        return READABLE if self.is_terminal[rhs[node.dot]] else EXPANSIBLE

    def next_symbol(self, node: ItemNode) -> int | None:
        rhs = self.rules[node.rule][1]
        return rhs[node.dot] if node.dot < len(rhs) else None

    def right_side(self, node: ItemNode) -> tuple[int, ...]:
        """Symbols after the one behind the dot (for an expanded item)."""
        return self.rules[node.rule][1][node.dot + 1:]

    def is_accept(self, node: ItemNode) -> bool:
        return node.rule == 0 and node.dot == 1

    def new_root(self) -> ItemNode:
        node = self._new_item(0, 0, None)
        return node

    def new_phase(self) -> None:
        self.phase += 1
        self._vars.clear()
        self._keys.clear()

    def end_nodes(self) -> list[ItemNode]:
        return list(self.ends.values())

    def _new_item(self, rule, dot, pred: VarNode | None) -> ItemNode:
        node = ItemNode(next(self._ids), rule, dot, self.phase, pred)
        self._keys[(rule, dot, pred.id if pred else None, self.phase)] = node
        self.node_count += 1
        self.inserted_nodes += 1
        self.ends[node.id] = node
        if pred is None:
            self.roots[node.id] = node
        else:
            pred.succs[node.id] = node
            self.edge_count += 1
            self.inserted_edges += 1
        return node

    def _link(self, item: ItemNode, var: VarNode) -> None:
        item.succ = var
        var.preds[item.id] = item
        self.ends.pop(item.id, None)
        self.edge_count += 1
        self.inserted_edges += 1

    # ------------------------------------------------------------ removal

    def remove(self, nodes: Iterable[ItemNode | VarNode]) -> int:
        """Delete nodes, then every node whose successors have all gone."""
        todo = list(nodes)
        removed = 0
        while todo:
            x = todo.pop()
            if not x.alive:
                continue
            x.alive = False
            removed += 1
            self.node_count -= 1
            if isinstance(x, ItemNode):
                self.ends.pop(x.id, None)
                if x.succ is not None:
                    var = x.succ
                    x.succ = None
                    if var.alive:
                        var.preds.pop(x.id, None)
                        self.edge_count -= 1
                p = x.pred
                if p is None:
                    self.roots.pop(x.id, None)
                elif p.alive:
                    p.succs.pop(x.id, None)
                    self.edge_count -= 1
                    if not p.succs:
                        todo.append(p)
            else:
                if self._vars.get(x.sym) is x:
                    del self._vars[x.sym]
                for u in x.preds.values():
                    u.succ = None
                    self.edge_count -= 1
                    todo.append(u)
                x.preds = {}
        return removed

    def _drop_var(self, var: VarNode) -> list[ItemNode]:
        """Remove an emptied variable node, leaving its predecessors as end nodes."""
        var.alive = False
        self.node_count -= 1
        if self._vars.get(var.sym) is var:
            del self._vars[var.sym]
        preds = list(var.preds.values())
        for u in preds:
            u.succ = None
            self.edge_count -= 1
            self.ends[u.id] = u
        var.preds = {}
        return preds

    # ------------------------------------------------------------ advancing

    def _advance_in_place(self, u: ItemNode) -> ItemNode | None:
        key = (u.rule, u.dot + 1, u.pred.id if u.pred else None, self.phase)
        if key in self._keys:
            self.remove([u])
            return None
        u.dot += 1
        u.phase = self.phase
        self._keys[key] = u
        return u

    def _advance_copy(self, u: ItemNode) -> ItemNode | None:
        key = (u.rule, u.dot + 1, u.pred.id if u.pred else None, self.phase)
        if key in self._keys:
            return None
        if u.pred is not None and not u.pred.alive:
            return None
        return self._new_item(u.rule, u.dot + 1, u.pred)

    # ------------------------------------------------------------ steps

    def expand(self, u: ItemNode, lookahead: int | None = None, restrict: bool = False) -> list[ItemNode]:
        """Expand the nonterminal behind the dot of end node ``u``.

        With ``restrict``, only alternatives that start with a nonterminal,
        with ``lookahead``, or are empty are used; if none remain, ``u`` is
        removed.  Returns the nodes that became new end nodes.
        """
        sym = self.next_symbol(u)
        var = self._vars.get(sym)
        if var is not None:
            self._link(u, var)
            if var.completed:
                copy = self._advance_copy(u)
                return [copy] if copy else []
            return []
        rules = self.alts[sym]
        if restrict:
            keep = []
            for r in rules:
                rhs = self.rules[r][1]
                if not rhs or not self.is_terminal[rhs[0]] or rhs[0] == lookahead:
                    keep.append(r)
                else:
                    self.blocked_terminals.add(rhs[0])
            rules = keep
        if not rules:
            self.remove([u])
            return []
        var = VarNode(next(self._ids), sym, self.phase)
        self._vars[sym] = var
        self.node_count += 1
        self.inserted_nodes += 1
        self._link(u, var)
        return [self._new_item(r, 0, var) for r in rules]

    def reduce(self, nodes: Iterable[ItemNode]) -> list[ItemNode]:
        """Reduce the given reducible end nodes.

        Each is removed; for every affected variable node, its predecessors
        are advanced in place when the variable node has no successor left
        (Type 1) or copied and advanced otherwise (Type 2).  Returns the
        advanced nodes.  The accept item ``[S' → S·]`` is never removed.
        """
        affected: dict[int, VarNode] = {}
        for r in nodes:
            if not r.alive or r.pred is None:
                continue
            var = r.pred
            r.alive = False
            self.node_count -= 1
            self.ends.pop(r.id, None)
            del var.succs[r.id]
            self.edge_count -= 1
            affected[var.id] = var
        out = []
        for var in affected.values():
            if var.phase == self.phase:
                var.completed = True
            if not var.succs:
                for u in self._drop_var(var):
                    moved = self._advance_in_place(u)
                    if moved is not None:
                        out.append(moved)
            else:
                for u in list(var.preds.values()):
                    copy = self._advance_copy(u)
                    if copy is not None:
                        out.append(copy)
        return out

    def read(self, token: int, keep: Iterable[ItemNode] | None = None) -> list[ItemNode]:
        """Reading step: drop end nodes not reading ``token``, advance the rest.

        ``keep`` optionally narrows the end nodes that survive.
        """
        ends = self.end_nodes()
        allowed = None if keep is None else {n.id for n in keep}
        survivors, dead = [], []
        for e in ends:
            if self.next_symbol(e) == token and (allowed is None or e.id in allowed):
                survivors.append(e)
            else:
                dead.append(e)
        self.remove(dead)
        self.new_phase()
        out = []
        for e in survivors:
            if e.alive:
                e.dot += 1
                e.phase = self.phase
                self._keys[(e.rule, e.dot, e.pred.id if e.pred else None, self.phase)] = e
                out.append(e)
        self.blocked_terminals = set()
        return out

    # ------------------------------------------------------------ inspection

    def paths(self, limit: int = 1000, max_len: int = 64) -> Iterator[list[ItemNode]]:
        """Root-to-end paths as item sequences, at most ``limit`` of them.

        A variable node is entered at most twice per path so cycles stay finite.
        """
        produced = 0
        stack: list[tuple[ItemNode, list[ItemNode], dict]] = [(r, [r], {}) for r in self.roots.values()]
        while stack and produced < limit:
            node, path, visits = stack.pop()
            if node.succ is None:
                produced += 1
                yield path
                continue
            var = node.succ
            seen = visits.get(var.id, 0)
            if seen >= 2 or len(path) >= max_len:
                continue
            nv = dict(visits)
            nv[var.id] = seen + 1
            for child in reversed(list(var.succs.values())):
                stack.append((child, path + [child], nv))

    def label(self, node: ItemNode) -> tuple[int, int]:
        return (node.rule, node.dot)

    def pref(self, path: list[ItemNode]) -> tuple[int, ...]:
        """Concatenated left sides along a path: the maximal viable prefix."""
        out: list[int] = []
        for node in path:
            out.extend(self.rules[node.rule][1][:node.dot])
        return tuple(out)

    def live_nodes(self) -> Iterator[ItemNode | VarNode]:
        seen = set()
        todo: deque = deque(self.roots.values())
        while todo:
            x = todo.popleft()
            if x.id in seen:
                continue
            seen.add(x.id)
            yield x
            if isinstance(x, ItemNode):
                if x.succ is not None:
                    todo.append(x.succ)
            else:
                todo.extend(x.succs.values())
