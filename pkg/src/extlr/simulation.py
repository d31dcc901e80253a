"""General (nondeterministic) simulation of the item pushdown automaton.

Works for any reduced context-free grammar, ambiguous or cyclic ones
included.  Each phase alternates expansion rounds and reduction rounds until
neither changes the graph, then reads the next token.
"""

from __future__ import annotations

from typing import Callable, Sequence

from .grammar import Grammar, require_reduced
from .graph import EXPANSIBLE, REDUCIBLE, ItemGraph

__all__ = ["simulate", "expansion_round", "reduction_round", "reading_step", "close_phase", "trace_line"]


def expansion_round(graph: ItemGraph, lookahead: int | None = None, restrict: bool = False) -> int:
    """Expand end nodes until none is expansible; returns the number of expansions."""
    queue = [e for e in graph.end_nodes() if graph.kind(e) == EXPANSIBLE]
    done = 0
    while queue:
        u = queue.pop()
        if not u.alive or u.succ is not None or graph.kind(u) != EXPANSIBLE:
            continue
        done += 1
        for v in graph.expand(u, lookahead, restrict):
            if graph.kind(v) == EXPANSIBLE:
                queue.append(v)
    return done


def reduction_round(graph: ItemGraph) -> int:
    """Reduce every reducible end node at once; returns how many were reduced."""
    batch = [e for e in graph.end_nodes() if graph.kind(e) == REDUCIBLE and not graph.is_accept(e)]
    if batch:
        graph.reduce(batch)
    return len(batch)


def close_phase(graph: ItemGraph, lookahead: int | None = None, restrict: bool = False) -> None:
    while True:
        expanded = expansion_round(graph, lookahead, restrict)
        reduced = reduction_round(graph)
        if not expanded and not reduced:
            return


def reading_step(graph: ItemGraph, token: int) -> bool:
    """Advance the end nodes that read ``token``; False if none do."""
    return bool(graph.read(token))


def trace_line(graph: ItemGraph) -> str:
    return f"phase={graph.phase} nodes={graph.node_count} edges={graph.edge_count} ends={len(graph.ends)}"


def simulate(g: Grammar, tokens: Sequence[int], trace: Callable[[str], None] | None = None,
             check: bool = True) -> bool:
    """Decide whether ``tokens`` (terminal ids) is in L(g)."""
    if check:
        require_reduced(g)
    graph = ItemGraph(g)
    graph.new_root()
    for i in range(len(tokens) + 1):
        close_phase(graph)
        if trace:
            trace(trace_line(graph))
        if i == len(tokens):
            break
        if not reading_step(graph, tokens[i]):
            return False
    return any(graph.is_accept(r) for r in graph.roots.values())
