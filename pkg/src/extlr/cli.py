"""Command-line entry point: ``extlr check|recognize|parse|bench``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .bench import DEFAULT_LR0_CAP, DEFAULT_LR0_MAX_N, DEFAULT_STRESS_LEN, format_bench_line, format_table, run_bench
from .extparser import LRConflict, ParseError, ext_parse
from .firstk import StrategyError, build_tables, compute_first_k, format_first_sets
from .grammar import GrammarError, GrammarNotReduced, check_reduced, parse_grammar, reduce_grammar, require_reduced
from .simulation import simulate


def _nonneg(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return v


def _n_range(text: str) -> range:
    lo, _, hi = text.partition("-")
    lo, hi = int(lo), int(hi or lo)
    if not 1 <= lo <= hi <= 20:
        raise argparse.ArgumentTypeError("n-range must lie within 1..20")
    return range(lo, hi + 1)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--grammar", type=Path, help="grammar file")
    common.add_argument("--k", type=_nonneg, default=None, help="lookahead length")
    common.add_argument("--strategy", choices=("table", "trie"), default=None,
                        help="lookahead strategy (default: table for k <= 3, else trie)")
    common.add_argument("--auto-reduce", action="store_true",
                        help="drop unreachable and unproductive symbols instead of failing")
    common.add_argument("--stats", action="store_true", help="print work counters")
    common.add_argument("--trace", action="store_true", help="print one line per phase")

    p = argparse.ArgumentParser(prog="extlr", description="Extended LR(k) parsing on a graph of item stacks.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", parents=[common], help="validate a grammar")
    c.add_argument("--dump-first", action="store_true", help="print FIRST_k of every symbol")

    r = sub.add_parser("recognize", parents=[common], help="membership test for any context-free grammar")
    r.add_argument("input", type=Path)

    ps = sub.add_parser("parse", parents=[common], help="deterministic LR(k) parse")
    ps.add_argument("input", type=Path)
    ps.add_argument("--debug", action="store_true", help="check the common-prefix invariant at every step")

    b = sub.add_parser("bench", parents=[common], help="G_n family benchmark")
    b.add_argument("--n-range", type=_n_range, default=range(1, 11), help="e.g. 1-10 (default)")
    b.add_argument("--stress-len", type=_nonneg, default=DEFAULT_STRESS_LEN,
                   help="m in the stress input a2^m a1 b1")
    b.add_argument("--lr0-max-n", type=int, default=DEFAULT_LR0_MAX_N,
                   help="largest n for which LR(0) states are counted")
    b.add_argument("--lr0-cap", type=int, default=DEFAULT_LR0_CAP)
    b.add_argument("--machine", action="store_true", help="only print the machine-readable lines")
    return p


def _load_grammar(args):
    if args.grammar is None:
        raise GrammarError("--grammar is required")
    g = parse_grammar(args.grammar.read_text())
    if args.auto_reduce:
        diag = check_reduced(g)
        if not diag.reduced:
            print(f"note: dropping {diag.describe()}", file=sys.stderr)
            g = reduce_grammar(g)
    else:
        require_reduced(g)
    return g


def _read_tokens(g, path: Path):
    return g.tokens(path.read_text().split())


def cmd_check(args) -> int:
    g = parse_grammar(args.grammar.read_text()) if args.grammar else None
    if g is None:
        raise GrammarError("--grammar is required")
    diag = check_reduced(g)
    if not diag.reduced:
        if not args.auto_reduce:
            print(f"error: grammar is not reduced: {diag.describe()}", file=sys.stderr)
            return 1
        g = reduce_grammar(g)
    print(f"ok: {len(g.terminals)} terminals, {len(g.nonterminals)} nonterminals, "
          f"{len(g.productions)} productions, size {g.size}")
    if args.dump_first:
        print(format_first_sets(compute_first_k(g, args.k or 0)))
    return 0


def cmd_recognize(args) -> int:
    g = _load_grammar(args)
    tokens = _read_tokens(g, args.input)
    trace = print if args.trace else None
    ok = simulate(g, tokens, trace=trace, check=False)
    print("accept" if ok else "reject")
    return 0 if ok else 1


def cmd_parse(args) -> int:
    g = _load_grammar(args)
    k = 1 if args.k is None else args.k
    try:
        tokens = _read_tokens(g, args.input)
    except GrammarError as exc:
        print(f"syntax error at {exc}", file=sys.stderr)
        return 1
    tables = build_tables(g, k, args.strategy or ("table" if k <= 3 else "trie")) if k else None
    try:
        d = ext_parse(g, tokens, k, args.strategy, tables=tables, debug=args.debug, check=False)
    except ParseError as exc:
        print(exc, file=sys.stderr)
        return 1
    except LRConflict as exc:
        print(exc)
        return 2
    for idx in d.productions:
        print(idx)
    print(f"ld={d.ld}")
    if args.stats:
        print(d.stats.line())
    return 0


def cmd_bench(args) -> int:
    k = 0 if args.k is None else args.k
    rows = run_bench(args.n_range, args.stress_len, k, args.strategy,
                     lr0_max_n=args.lr0_max_n, lr0_cap=args.lr0_cap)
    if not args.machine:
        print(format_table(rows))
    for row in rows:
        print(format_bench_line(row))
        if args.stats:
            print(row.stats)
    return 0


COMMANDS = {"check": cmd_check, "recognize": cmd_recognize, "parse": cmd_parse, "bench": cmd_bench}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except GrammarNotReduced as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (GrammarError, StrategyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
