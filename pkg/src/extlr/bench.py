"""Benchmark over the G_n grammar family: static sizes and a long stress parse."""

from __future__ import annotations

import re
import time
from dataclasses import dataclass

from .extparser import ext_parse
from .firstk import build_tables
from .grammar import gen_gn
from .oracle import Inconclusive, count_lr0_states

__all__ = ["BenchRow", "bench_row", "run_bench", "stress_input", "format_bench_line",
           "parse_bench_line", "fit_quadratic", "format_table"]

DEFAULT_STRESS_LEN = 9998
DEFAULT_LR0_MAX_N = 6
DEFAULT_LR0_CAP = 200_000


@dataclass
class BenchRow:
    n: int
    size: int
    ext_elems: int
    lr0_states: int | None  # None means the cap was hit or the count was skipped
    ld: int
    ms: float
    stats: str = ""


def stress_input(n: int, m: int = DEFAULT_STRESS_LEN) -> list[str]:
    """``a2^m a1 b1``; G_1 has no ``a2``, so it gets ``a1^(m+1) b1`` (same derivation length)."""
    if n == 1:
        return ["a1"] * (m + 1) + ["b1"]
    return ["a2"] * m + ["a1", "b1"]


def bench_row(n: int, m: int = DEFAULT_STRESS_LEN, k: int = 0, strategy: str | None = None,
              lr0_max_n: int = DEFAULT_LR0_MAX_N, lr0_cap: int = DEFAULT_LR0_CAP) -> BenchRow:
    g = gen_gn(n)
    strategy = strategy or ("table" if k <= 3 else "trie")
    tables = build_tables(g, k, strategy)
    lr0 = None
    if n <= lr0_max_n:
        try:
            lr0 = count_lr0_states(g, lr0_cap)
        except Inconclusive:
            lr0 = None
    tokens = g.tokens(stress_input(n, m))
    t0 = time.perf_counter()
    d = ext_parse(g, tokens, k, strategy, tables=tables if k else None, check=False)
    ms = (time.perf_counter() - t0) * 1000
    return BenchRow(n, g.size, tables.element_count(), lr0, d.ld, round(ms, 1), d.stats.line())


def run_bench(ns, m: int = DEFAULT_STRESS_LEN, k: int = 0, strategy: str | None = None, **kw) -> list[BenchRow]:
    return [bench_row(n, m, k, strategy, **kw) for n in ns]


def format_bench_line(row: BenchRow) -> str:
    lr0 = ">cap" if row.lr0_states is None else str(row.lr0_states)
    return (f"bench n={row.n} size={row.size} ext_elems={row.ext_elems} "
            f"lr0_states={lr0} ld={row.ld} ms={row.ms}")


_LINE = re.compile(r"bench n=(\d+) size=(\d+) ext_elems=(\d+) lr0_states=(>cap|\d+) ld=(\d+) ms=([0-9.]+)$")


def parse_bench_line(line: str) -> BenchRow:
    m = _LINE.match(line.strip())
    if not m:
        raise ValueError(f"not a bench line: {line!r}")
    n, size, elems, lr0, ld, ms = m.groups()
    return BenchRow(int(n), int(size), int(elems), None if lr0 == ">cap" else int(lr0), int(ld), float(ms))


def fit_quadratic(ns, ys) -> tuple[float, float]:
    """Least-squares ``c`` for ``y ≈ c·n²`` and the worst relative residual ``|y - c n²| / y``."""
    c = sum(y * n * n for n, y in zip(ns, ys)) / sum(n ** 4 for n in ns)
    worst = max(abs(y - c * n * n) / y for n, y in zip(ns, ys))
    return c, worst


def format_table(rows: list[BenchRow]) -> str:
    head = f"{'n':>3} {'|G|':>6} {'ext elems':>10} {'LR(0) states':>13} {'ld':>7} {'ms':>9}"
    lines = [head, "-" * len(head)]
    for r in rows:
        lr0 = ">cap" if r.lr0_states is None else str(r.lr0_states)
        lines.append(f"{r.n:>3} {r.size:>6} {r.ext_elems:>10} {lr0:>13} {r.ld:>7} {r.ms:>9.1f}")
    return "\n".join(lines)

