from hypothesis import given, strategies as st

from extlr.bench import BenchRow, bench_row, fit_quadratic, format_bench_line, parse_bench_line, stress_input


def test_row_for_g2():
    row = bench_row(2, m=10)
    assert (row.n, row.size, row.lr0_states, row.ld) == (2, 36, 24, 13)
    assert row.ext_elems == 6 * 4 + 8 * 2 + 3


def test_lr0_skipped_above_limit():
    assert bench_row(3, m=2, lr0_max_n=2).lr0_states is None
    assert ">cap" in format_bench_line(bench_row(3, m=2, lr0_max_n=2))


def test_stress_input_shape():
    assert stress_input(10, 3) == ["a2", "a2", "a2", "a1", "b1"]
    assert len(stress_input(10)) == 10000
    assert stress_input(1, 2) == ["a1", "a1", "a1", "b1"]


def test_fit_exact_quadratic():
    c, worst = fit_quadratic([1, 2, 3], [2, 8, 18])
    assert abs(c - 2) < 1e-12 and worst < 1e-12


@given(st.integers(1, 20), st.integers(0, 10**6), st.integers(0, 10**6),
       st.one_of(st.none(), st.integers(1, 10**6)), st.integers(0, 10**6), st.floats(0, 1e6))
def test_bench_line_round_trip(n, size, elems, lr0, ld, ms):
    row = BenchRow(n, size, elems, lr0, ld, round(ms, 1))
    assert parse_bench_line(format_bench_line(row)) == row


def test_deterministic_apart_from_time():
    a, b = bench_row(3, m=5), bench_row(3, m=5)
    assert (a.size, a.ext_elems, a.lr0_states, a.ld) == (b.size, b.ext_elems, b.lr0_states, b.ld)
