"""Grammar model, the text grammar format, reducedness analysis, and the G_n family.

Grammar file format::

    # comment
    %start S
    %tokens a b
    S : a S b
      |            # empty alternative
      ;

Symbols declared by ``%tokens`` are terminals; every other symbol must appear
on some left-hand side.  Productions are numbered from 1 in declaration order,
alternatives left to right.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

__all__ = [
    "Symbol",
    "Production",
    "Grammar",
    "GrammarDiagnostics",
    "GrammarError",
    "GrammarFormatError",
    "GrammarNotReduced",
    "parse_grammar",
    "format_grammar",
    "check_reduced",
    "require_reduced",
    "reduce_grammar",
    "gen_gn",
]

NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


class GrammarError(ValueError):
    """Raised for grammars that cannot be used."""


class GrammarFormatError(GrammarError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line else ""
        super().__init__(where + message)


class GrammarNotReduced(GrammarError):
    def __init__(self, diagnostics: "GrammarDiagnostics"):
        self.diagnostics = diagnostics
        super().__init__(f"grammar is not reduced: {diagnostics.describe()}")


@dataclass(frozen=True)
class Symbol:
    id: int
    name: str
    terminal: bool

    @property
    def kind(self) -> str:
        return "terminal" if self.terminal else "nonterminal"

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Production:
    index: int
    lhs: Symbol
    rhs: tuple[Symbol, ...]

    def __len__(self):
        return len(self.rhs)

    def __str__(self):
        body = " ".join(s.name for s in self.rhs) or "ε"
        return f"{self.lhs.name} → {body}"


@dataclass(frozen=True)
class Grammar:
    """An immutable context-free grammar ``(V, Σ, P, S)``.

    ``symbols`` is indexed by symbol id. ``productions`` excludes the augmented
    production ``S' → S``, which parsing engines add internally (see ``rules``).
    """

    symbols: tuple[Symbol, ...]
    productions: tuple[Production, ...]
    start: Symbol
    _by_name: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_by_name", {s.name: s for s in self.symbols})

    def __getitem__(self, name: str) -> Symbol:
        return self._by_name[name]

    def __contains__(self, name: str) -> bool:
        return name in self._by_name

    @property
    def terminals(self) -> tuple[Symbol, ...]:
        return tuple(s for s in self.symbols if s.terminal)

    @property
    def nonterminals(self) -> tuple[Symbol, ...]:
        return tuple(s for s in self.symbols if not s.terminal)

    @property
    def size(self) -> int:
        """``|G|``: the summed lengths of ``Aα`` over all productions."""
        return sum(1 + len(p.rhs) for p in self.productions)

    @cached_property
    def alternatives(self) -> dict[int, tuple[Production, ...]]:
        """Productions grouped by left-hand side id, in declaration order."""
        out: dict[int, list[Production]] = {s.id: [] for s in self.nonterminals}
        for p in self.productions:
            out[p.lhs.id].append(p)
        return {k: tuple(v) for k, v in out.items()}

    @cached_property
    def rules(self) -> tuple[tuple[int, tuple[int, ...]], ...]:
        """Engine view: ``(lhs_id, rhs_ids)`` per rule; rule 0 is ``S' → S`` (lhs -1)."""
        aug = (-1, (self.start.id,))
        return (aug,) + tuple((p.lhs.id, tuple(s.id for s in p.rhs)) for p in self.productions)

    @cached_property
    def is_terminal(self) -> tuple[bool, ...]:
        return tuple(s.terminal for s in self.symbols)

    def rule_alternatives(self) -> dict[int, tuple[int, ...]]:
        """Rule numbers (positions in ``rules``) per nonterminal id."""
        out: dict[int, list[int]] = {s.id: [] for s in self.nonterminals}
        for r, (lhs, _) in enumerate(self.rules):
            if r:
                out[lhs].append(r)
        return {k: tuple(v) for k, v in out.items()}

    def tokens(self, names: Iterable[str]) -> list[int]:
        """Map token names to terminal ids, rejecting unknown or nonterminal names."""
        out = []
        for pos, name in enumerate(names, 1):
            sym = self._by_name.get(name)
            if sym is None or not sym.terminal:
                raise GrammarError(f"token {pos}: {name!r} is not a terminal of the grammar")
            out.append(sym.id)
        return out


@dataclass(frozen=True)
class GrammarDiagnostics:
    unreachable: frozenset[Symbol]
    unproductive: frozenset[Symbol]

    @property
    def reduced(self) -> bool:
        return not self.unreachable and not self.unproductive

    def describe(self) -> str:
        parts = []
        if self.unreachable:
            parts.append("unreachable: " + ", ".join(sorted(s.name for s in self.unreachable)))
        if self.unproductive:
            parts.append("unproductive: " + ", ".join(sorted(s.name for s in self.unproductive)))
        return "; ".join(parts) or "reduced"


def _tokenize(text: str):
    """Yield ``(kind, value, line, column)``; kinds are name, directive, punct, eol."""
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        col = 0
        while col < len(line):
            ch = line[col]
            if ch.isspace():
                col += 1
                continue
            if ch in ":|;":
                yield "punct", ch, lineno, col + 1
                col += 1
                continue
            if ch == "%":
                m = NAME_RE.match(line, col + 1)
                if not m:
                    raise GrammarFormatError("malformed directive", lineno, col + 1)
                yield "directive", m.group(), lineno, col + 1
                col = m.end()
                continue
            m = NAME_RE.match(line, col)
            if not m:
                raise GrammarFormatError(f"unexpected character {ch!r}", lineno, col + 1)
            yield "name", m.group(), lineno, col + 1
            col = m.end()
        yield "eol", "", lineno, len(line) + 1


def parse_grammar(text: str) -> Grammar:
    """Parse the grammar file format into a :class:`Grammar`."""
    toks = list(_tokenize(text))
    tokens_decl: dict[str, tuple[int, int]] = {}
    start: tuple[str, int, int] | None = None
    rules: list[tuple[str, list[list[tuple[str, int, int]]], int, int]] = []

    i = 0
    n = len(toks)
    while i < n:
        kind, value, line, col = toks[i]
        if kind == "eol":
            i += 1
        elif kind == "directive":
            i += 1
            names = []
            while toks[i][0] == "name":
                names.append(toks[i])
                i += 1
            if toks[i][0] != "eol":
                raise GrammarFormatError(f"unexpected {toks[i][1]!r} after %{value}", toks[i][2], toks[i][3])
            if value == "start":
                if start is not None:
                    raise GrammarFormatError("duplicate %start", line, col)
                if len(names) != 1:
                    raise GrammarFormatError("%start takes exactly one symbol", line, col)
                start = names[0][1:]
            elif value == "tokens":
                if not names:
                    raise GrammarFormatError("%tokens needs at least one name", line, col)
                for _, name, tl, tc in names:
                    if name in tokens_decl:
                        raise GrammarFormatError(f"duplicate token declaration {name!r}", tl, tc)
                    tokens_decl[name] = (tl, tc)
            else:
                raise GrammarFormatError(f"unknown directive %{value}", line, col)
        elif kind == "name":
            lhs = value
            i += 1
            while toks[i][0] == "eol":
                i += 1
            if toks[i][1] != ":":
                raise GrammarFormatError(f"expected ':' after {lhs!r}", toks[i][2], toks[i][3])
            i += 1
            alts: list[list[tuple[str, int, int]]] = [[]]
            while True:
                if i >= n:
                    raise GrammarFormatError(f"unterminated rule for {lhs!r} (missing ';')", line, col)
                k2, v2, l2, c2 = toks[i]
                i += 1
                if k2 == "eol":
                    continue
                if k2 == "name":
                    alts[-1].append((v2, l2, c2))
                elif v2 == "|":
                    alts.append([])
                elif v2 == ";":
                    break
                else:
                    raise GrammarFormatError(f"unexpected {v2!r} in rule for {lhs!r}", l2, c2)
            rules.append((lhs, alts, line, col))
        else:
            raise GrammarFormatError(f"unexpected {value!r}", line, col)

    if start is None:
        raise GrammarFormatError("missing %start")
    lhs_names: dict[str, None] = {}
    for lhs, _, line, col in rules:
        if lhs in tokens_decl:
            raise GrammarFormatError(f"terminal {lhs!r} used as a left-hand side", line, col)
        lhs_names.setdefault(lhs)
    sname, sl, sc = start
    if sname in tokens_decl:
        raise GrammarFormatError(f"start symbol {sname!r} is a terminal", sl, sc)
    if sname not in lhs_names:
        raise GrammarFormatError(f"start symbol {sname!r} has no productions", sl, sc)
    for _, alts, _, _ in rules:
        for alt in alts:
            for name, l2, c2 in alt:
                if name not in tokens_decl and name not in lhs_names:
                    raise GrammarFormatError(f"symbol {name!r} is neither a token nor defined by a rule", l2, c2)

    return _build(
        list(tokens_decl),
        list(lhs_names),
        sname,
        [(lhs, [name for name, _, _ in alt]) for lhs, alts, _, _ in rules for alt in alts],
    )


def _build(terminals: Sequence[str], nonterminals: Sequence[str], start: str,
           prods: Sequence[tuple[str, Sequence[str]]], indices: Sequence[int] | None = None) -> Grammar:
    symbols = [Symbol(i, name, True) for i, name in enumerate(terminals)]
    symbols += [Symbol(len(terminals) + i, name, False) for i, name in enumerate(nonterminals)]
    by_name = {s.name: s for s in symbols}
    productions = tuple(
        Production(indices[j] if indices else j + 1, by_name[lhs], tuple(by_name[x] for x in rhs))
        for j, (lhs, rhs) in enumerate(prods)
    )
    return Grammar(tuple(symbols), productions, by_name[start])


def format_grammar(g: Grammar) -> str:
    """Serialize back to the text format; consecutive same-lhs productions share a rule."""
    out = [f"%start {g.start.name}"]
    if g.terminals:
        out.append("%tokens " + " ".join(s.name for s in g.terminals))
    group: list[Production] = []

    def flush():
        if group:
            alts = " | ".join(" ".join(s.name for s in p.rhs) for p in group)
            out.append(f"{group[0].lhs.name} : {alts} ;".replace("  ", " "))
            group.clear()

    for p in g.productions:
        if group and group[0].lhs != p.lhs:
            flush()
        group.append(p)
    flush()
    return "\n".join(out) + "\n"


def _productive(g: Grammar) -> set[int]:
    good = {s.id for s in g.terminals}
    changed = True
    while changed:
        changed = False
        for p in g.productions:
            if p.lhs.id not in good and all(s.id in good for s in p.rhs):
                good.add(p.lhs.id)
                changed = True
    return good


def _reachable(g: Grammar, productions: Iterable[Production]) -> set[int]:
    prods = list(productions)
    seen = {g.start.id}
    todo = [g.start.id]
    while todo:
        a = todo.pop()
        for p in prods:
            if p.lhs.id == a:
                for s in p.rhs:
                    if s.id not in seen:
                        seen.add(s.id)
                        todo.append(s.id)
    return seen


def check_reduced(g: Grammar) -> GrammarDiagnostics:
    """Report the symbols that are unreachable from the start symbol or unproductive."""
    productive = _productive(g)
    reachable = _reachable(g, g.productions)
    return GrammarDiagnostics(
        unreachable=frozenset(s for s in g.symbols if s.id not in reachable),
        unproductive=frozenset(s for s in g.symbols if s.id not in productive),
    )


def require_reduced(g: Grammar) -> None:
    diag = check_reduced(g)
    if not diag.reduced:
        raise GrammarNotReduced(diag)


def reduce_grammar(g: Grammar) -> Grammar:
    """Drop unproductive, then unreachable, symbols and their productions.

    Surviving productions keep their original numbers so derivation output
    still refers to the source file.
    """
    productive = _productive(g)
    if g.start.id not in productive:
        raise GrammarError(f"start symbol {g.start.name!r} derives no terminal string")
    kept = [p for p in g.productions if p.lhs.id in productive and all(s.id in productive for s in p.rhs)]
    reachable = _reachable(g, kept)
    kept = [p for p in kept if p.lhs.id in reachable]
    terms = [s.name for s in g.terminals if s.id in reachable]
    nonterms = [s.name for s in g.nonterminals if s.id in reachable]
    return _build(terms, nonterms, g.start.name,
                  [(p.lhs.name, [s.name for s in p.rhs]) for p in kept],
                  [p.index for p in kept])


def gen_gn(n: int) -> Grammar:
    """The LR(0) family G_n, whose canonical LR(0) automaton grows exponentially with n."""
    if n < 1:
        raise ValueError("G_n needs n >= 1")
    r = range(1, n + 1)
    prods: list[tuple[str, list[str]]] = [("S", [f"A{i}"]) for i in r]
    for i in r:
        prods += [(f"A{i}", [f"a{j}", f"A{i}"]) for j in r if j != i]
        prods += [(f"A{i}", [f"a{i}", f"B{i}"]), (f"A{i}", [f"b{i}"])]
    for i in r:
        prods += [(f"B{i}", [f"a{j}", f"B{i}"]) for j in r]
        prods.append((f"B{i}", [f"b{i}"]))
    terminals = [f"a{i}" for i in r] + [f"b{i}" for i in r]
    nonterminals = ["S"] + [f"A{i}" for i in r] + [f"B{i}" for i in r]
    return _build(terminals, nonterminals, "S", prods)
