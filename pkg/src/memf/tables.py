"""Reference tables: generated values and the published 2-significant-figure strings."""

from __future__ import annotations

from . import kernels, partition

TABLE1_N = tuple(range(2, 11))
TABLE_N = (3, 5, 7, 9, 11, 13, 15)
TABLE_P = (0, 1, 2, 3, 4)

EXPECTED_TABLE1 = {
    "x_n": ("1.534", "2.052", "2.476", "2.843", "3.170", "3.467", "3.742", "3.999", "4.240"),
    "g_n": ("1.374", "1.584", "1.772", "1.942", "2.099", "2.245", "2.382", "2.512", "2.635"),
}

# rows p = 0..4, columns n = 3, 5, ..., 15
EXPECTED_TABLE2 = (
    ("7.8e-2", "1.5e-2", "5.0e-3", "2.2e-3", "1.2e-3", "7.8e-4", "5.9e-4"),
    ("1.3e-2", "5.4e-4", "4.1e-5", "4.4e-6", "6.0e-7", "9.6e-8", "1.8e-8"),
    ("5.0e-3", "8.3e-5", "2.7e-6", "1.2e-7", "7.1e-9", "5.0e-10", "4.2e-11"),
    ("2.6e-3", "2.3e-5", "3.9e-7", "9.8e-9", "3.2e-10", "1.2e-11", "5.7e-13"),
    ("1.6e-3", "8.6e-6", "9.2e-8", "1.4e-9", "2.9e-11", "7.1e-13", "2.1e-14"),
)
# printed as "9." at (p=2, n=5)
EXPECTED_TABLE3 = (
    ("6.5e-2", "1.6e-2", "6.4e-3", "3.2e-3", "1.9e-3", "1.4e-3", "1.1e-3"),
    ("1.1e-2", "5.8e-4", "5.3e-5", "6.4e-6", "9.5e-7", "1.7e-7", "3.4e-8"),
    ("4.1e-3", "9.0e-5", "3.4e-6", "1.8e-7", "1.1e-8", "8.8e-10", "7.8e-11"),
    ("2.2e-3", "2.5e-5", "5.0e-7", "1.4e-8", "5.1e-10", "2.2e-11", "1.1e-12"),
    ("1.3e-3", "9.3e-6", "1.2e-7", "2.1e-9", "4.6e-11", "1.2e-12", "3.9e-14"),
)
EXPECTED_TABLE4 = (
    ("2.2e-2", "4.7e-3", "1.6e-3", "7.2e-4", "4.0e-4", "2.6e-4", "2.0e-4"),
    ("5.8e-3", "2.6e-4", "2.1e-5", "2.3e-6", "3.1e-7", "5.1e-8", "9.6e-9"),
    ("3.2e-3", "5.8e-5", "1.9e-6", "9.0e-8", "5.3e-9", "3.8e-10", "3.2e-11"),
    ("2.1e-3", "2.1e-5", "3.7e-7", "9.5e-9", "3.1e-10", "1.2e-11", "5.7e-13"),
    ("1.6e-3", "9.7e-6", "1.1e-7", "1.7e-9", "3.5e-11", "8.7e-13", "2.6e-14"),
)


def two_sig(v):
    """Format as d.de-k with an unpadded exponent."""
    mant, exp = f"{v:.1e}".split("e")
    return f"{mant}e{int(exp)}"


def table1():
    rows = [kernels.envelope(n) for n in TABLE1_N]
    return {
        "x_n": tuple(f"{e.x_n:.3f}" for e in rows),
        "g_n": tuple(f"{e.g_peak:.3f}" for e in rows),
    }


def _grid(fn):
    return tuple(tuple(fn(n, p) for n in TABLE_N) for p in TABLE_P)


def table2(B=1.0):
    return _grid(lambda n, p: partition.well1d_bound_A(B, n, p))


def table3(B=1.0, m=0):
    return _grid(lambda n, p: partition.well1d_bound_H(B, m, n, p))


def table4(B=1.0, m=0):
    return _grid(lambda n, p: partition.well2d_bound_H(B, m, n, p))


def diff_grid(values, expected):
    """List of (p, n, got, want) cells whose 2-s.f. strings differ."""
    out = []
    for p, row, want_row in zip(TABLE_P, values, expected):
        for n, v, want in zip(TABLE_N, row, want_row):
            got = two_sig(v)
            if got != want:
                out.append((p, n, got, want))
    return out


def diff_table1(values=None):
    values = values or table1()
    out = []
    for key in ("x_n", "g_n"):
        for n, got, want in zip(TABLE1_N, values[key], EXPECTED_TABLE1[key]):
            if got != want:
                out.append((key, n, got, want))
    return out
