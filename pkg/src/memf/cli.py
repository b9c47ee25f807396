"""Command-line front end: tables, sums, partition functions, sweeps, figure data."""

from __future__ import annotations

import argparse
import csv
import io
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import families, memf1d, memf2d, oracle, partition, tables
from .errors import MemfError

COMMANDS = ("tables", "sum1d", "sum2d", "partition", "sweep", "fig2", "conjecture")
SYSTEMS = ("well1d", "rotator", "well2d")
FAMILIES = ("gaussian", "rational", "expcos")

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2


class UsageError(Exception):
    code = "E_USAGE"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def fmt(v):
    """Shortest round-trip scientific notation."""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(v)
    if v is None:
        return ""
    if isinstance(v, str):
        return v
    v = float(v)
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return np.format_float_scientific(v, unique=True, trim="-")


def build_parser():
    ap = _Parser(prog="memf", description="Modified Euler-Maclaurin summation with certified remainder bounds.")
    ap.add_argument("--command", required=True, choices=COMMANDS)
    ap.add_argument("--system", choices=SYSTEMS + ("all",), default="well1d")
    ap.add_argument("--family", choices=FAMILIES, default="gaussian")
    ap.add_argument("--B", type=float, default=1.0, help="B (wells) or Bc (rotator); Gaussian width for sums")
    ap.add_argument("--s", type=float, default=1.0, help="exponent of the rational family")
    ap.add_argument("--lam", type=float, default=1.0)
    ap.add_argument("--omega", type=float, default=1.0)
    ap.add_argument("--m", type=int, default=None, help="explicit head length (default 0; fig2: 2)")
    ap.add_argument("--n", type=int, default=None, help="derivative order (default 3; fig2: 5)")
    ap.add_argument("--p", type=int, default=None, help="Fourier cut (default 0; fig2: 2)")
    ap.add_argument("--n2", type=int, default=None)
    ap.add_argument("--p2", type=int, default=None)
    ap.add_argument("--a", type=int, default=1, help="lower summation limit")
    ap.add_argument("--b", type=str, default="inf", help="upper summation limit (integer or inf)")
    ap.add_argument("--rect", type=int, nargs=4, metavar=("A", "B", "C", "D"), default=(1, 6, 1, 6),
                    help="half-open rectangle [A,B) x [C,D) for sum2d")
    ap.add_argument("--B-min", dest="B_min", type=float, default=None)
    ap.add_argument("--B-max", dest="B_max", type=float, default=None)
    ap.add_argument("--B-step", dest="B_step", type=float, default=None)
    ap.add_argument("--n-max", dest="n_max", type=int, default=partition.CONJECTURE_MAX_N,
                    help="highest Hermite order for the envelope check")
    ap.add_argument("--grid-step", dest="grid_step", type=float, default=partition.CONJECTURE_GRID_STEP)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--out", default=None, help="output file (directory for tables); stdout if omitted")
    ap.add_argument("--format", choices=("csv", "tsv"), default="csv")
    ap.add_argument("--timing", action="store_true", help="add wall-clock timings to sum1d metadata")
    ap.add_argument("--inject-fault", dest="inject_fault", action="store_true", help=argparse.SUPPRESS)
    return ap


# --------------------------------------------------------------------------
# Output
# --------------------------------------------------------------------------

def render(header, rows, meta, fmt_name):
    buf = io.StringIO()
    for key, val in meta:
        buf.write(f"# {key}: {val}\n")
    w = csv.writer(buf, delimiter="\t" if fmt_name == "tsv" else ",", lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


def emit(text, path):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


# --------------------------------------------------------------------------
# Commands
# --------------------------------------------------------------------------

def _need(cond, message):
    if not cond:
        raise UsageError(message)


def cmd_tables(cfg):
    out_dir = cfg.out or "."
    os.makedirs(out_dir, exist_ok=True)
    ext = cfg.format
    t1 = tables.table1()
    rows = [("x_n",) + t1["x_n"], ("g_n",) + t1["g_n"]]
    files = {f"table1.{ext}": render(["quantity"] + [f"n={n}" for n in tables.TABLE1_N], rows, [], ext)}
    mism = [("table1",) + d for d in tables.diff_table1(t1)]
    specs = (
        ("table2", tables.table2, tables.EXPECTED_TABLE2, "bound_A, B=1"),
        ("table3", tables.table3, tables.EXPECTED_TABLE3, "bound_H, B=1, m=0"),
        ("table4", tables.table4, tables.EXPECTED_TABLE4, "2D bound_H, B=1, m=0"),
    )
    for name, gen, expected, desc in specs:
        vals = gen()
        rows = [(p,) + tuple(tables.two_sig(v) for v in row) for p, row in zip(tables.TABLE_P, vals)]
        files[f"{name}.{ext}"] = render(["p"] + [f"n={n}" for n in tables.TABLE_N], rows, [("table", desc)], ext)
        mism += [(name,) + d for d in tables.diff_grid(vals, expected)]
    files[f"tables_diff.{ext}"] = render(
        ["table", "row", "column", "got", "expected"], mism, [("mismatches", len(mism))], ext
    )
    for fname, text in files.items():
        emit(text, os.path.join(out_dir, fname))
    sys.stderr.write(f"tables: {len(mism)} mismatches\n")
    return EXIT_CHECK_FAILED if mism else EXIT_OK


def _family(cfg):
    if cfg.family == "gaussian":
        return families.Gaussian(cfg.B)
    if cfg.family == "rational":
        return families.RationalDecay(cfg.s)
    return families.ExpCos(cfg.lam, cfg.omega)


def _parse_b(text):
    if text.strip().lower() in ("inf", "+inf", "infinity"):
        return math.inf
    try:
        return int(text)
    except ValueError:
        raise UsageError(f"--b must be an integer or inf, got {text!r}") from None


def cmd_sum1d(cfg):
    f = _family(cfg)
    b = _parse_b(cfg.b)
    cut = memf1d.CutParams(m=cfg.m, n=cfg.n, p=cfg.p)
    t0 = time.perf_counter()
    if math.isinf(b):
        est = memf1d.memf_sum_infinite(f, cfg.a, cut)
    else:
        est = memf1d.memf_sum_finite(f, cfg.a, b, cut)
    t_memf = time.perf_counter() - t0
    ref = None
    t0 = time.perf_counter()
    if not math.isinf(b):
        ref = oracle.direct_sum_1d(lambda i: float(f(i)), cfg.a, b)
    elif cfg.family == "gaussian" and cfg.a >= 0:
        ref = oracle.direct_sum_1d_infinite(lambda i: float(f(i)), cfg.a, oracle.gaussian_majorant(cfg.B)).value
    t_oracle = time.perf_counter() - t0
    rows = [
        ("head", est.head),
        ("grating_term", est.grating_term),
        ("endpoint_term", est.endpoint_term),
        ("correction_term", est.correction_term),
        ("total", est.total),
    ]
    if ref is not None:
        rows += [("oracle", ref), ("abs_error", abs(est.total - ref))]
    rows += [(f"bound_{bd.kind}", bd.value) for bd in est.bounds]
    meta = [("family", repr(f)), ("a", cfg.a), ("b", fmt(float(b))), ("cut", f"m={cut.m} n={cut.n} p={cut.p}")]
    if cfg.timing:
        meta += [("time_memf_s", fmt(t_memf)), ("time_oracle_s", fmt(t_oracle))]
    emit(render(["quantity", "value"], rows, meta, cfg.format), cfg.out)
    return EXIT_OK


def cmd_sum2d(cfg):
    g = _family(cfg)
    f = families.Product2D(g, g)
    a, b, c, d = cfg.rect
    _need(a < b and c < d, "--rect needs A < B and C < D")
    cut = memf2d.CutParams2D(n=cfg.n, p=cfg.p, n2=cfg.n2, p2=cfg.p2)
    est = memf2d.memf_sum_rectangle(f, a, b, c, d, cut)
    ref = oracle.direct_sum_2d(lambda i, j: float(f(i, j)), [(i, j) for i in range(a, b) for j in range(c, d)])
    rows = [
        ("area", est.area),
        ("line", est.line),
        ("vertex", est.vertex),
        ("total", est.total),
        ("oracle", ref),
        ("abs_error", abs(est.total - ref)),
    ] + [(f"bound_{bd.kind}", bd.value) for bd in est.bounds]
    meta = [("function", repr(f)), ("rect", f"[{a},{b})x[{c},{d})"),
            ("cut", f"n={cut.n} p={cut.p} n2={cut.n2} p2={cut.p2}")]
    emit(render(["quantity", "value"], rows, meta, cfg.format), cfg.out)
    return EXIT_OK


SWEEP_B = tuple(2.0 ** k for k in range(-6, 5))
SWEEP_HEADER = ["system", "B", "m", "n", "p", "value", "oracle", "abs_error", "bound_A", "bound_H", "valid", "valid_strict"]


def _reference(system, B):
    if system == "well1d":
        return oracle.well1d_reference(B).value
    if system == "rotator":
        return oracle.rotator_reference(B).value
    return oracle.well2d_reference(B).value


def _evaluate(system, B, m, n, p, sign=1):
    cut = memf1d.CutParams(m=m, n=n, p=p)
    if system == "well1d":
        return partition.well1d_partition(B, cut, correction_sign=sign)
    if system == "rotator":
        return partition.rotator_partition(B, cut, correction_sign=sign)
    return partition.well2d_partition(B, m, n, p, correction_sign=sign)


def _sweep_point(args):
    system, B, m, n, p, sign, ref = args
    r = _evaluate(system, B, m, n, p, sign)
    err = abs(r.value - ref)
    bound = r.min_bound()
    return (system, B, m, n, p, r.value, ref, err, r.bound_A, r.bound_H,
            bool(partition.within_bound(err, bound, r.value, ref)), bool(err <= bound))


def sweep_grid(systems, Bs):
    for system in systems:
        ms = range(3) if system == "well2d" else range(4)
        ns = (3, 5, 7) if system == "well2d" else range(2, 10)
        ps = range(4) if system == "well2d" else range(5)
        for B in Bs:
            for m in ms:
                for n in ns:
                    for p in ps:
                        yield system, B, m, n, p


def run_sweep(systems, Bs, sign=1, jobs=1):
    """Rows in SWEEP_HEADER order, in grid order whatever the job count."""
    refs = {(s, B): _reference(s, B) for s in systems for B in Bs}
    tasks = [pt + (sign, refs[(pt[0], pt[1])]) for pt in sweep_grid(systems, Bs)]
    if jobs == 1:
        return [_sweep_point(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(_sweep_point, tasks, chunksize=64))


def _B_values(cfg, default):
    if cfg.B_min is None and cfg.B_max is None and cfg.B_step is None:
        return default
    _need(None not in (cfg.B_min, cfg.B_max, cfg.B_step), "--B-min, --B-max and --B-step go together")
    _need(0 < cfg.B_min <= cfg.B_max and cfg.B_step > 0, "need 0 < B-min <= B-max and B-step > 0")
    count = int(math.floor((cfg.B_max - cfg.B_min) / cfg.B_step + 1e-9)) + 1
    return [cfg.B_min + i * cfg.B_step for i in range(count)]


def cmd_sweep(cfg):
    systems = SYSTEMS if cfg.system == "all" else (cfg.system,)
    Bs = _B_values(cfg, list(SWEEP_B))
    _need(cfg.jobs >= 1, "--jobs must be >= 1")
    rows = run_sweep(systems, Bs, sign=-1 if cfg.inject_fault else 1, jobs=cfg.jobs)
    bad = sum(1 for r in rows if not r[10])
    strict = sum(1 for r in rows if not r[11])
    meta = [("systems", " ".join(systems)), ("points", len(rows)), ("violations", bad),
            ("strict_violations", strict), ("roundoff_allowance_ulps", partition.ROUNDOFF_ULPS)]
    if cfg.inject_fault:
        meta.append(("fault", "correction sign flipped"))
    emit(render(SWEEP_HEADER, rows, meta, cfg.format), cfg.out)
    sys.stderr.write(f"sweep: {len(rows)} points, {bad} violations\n")
    return EXIT_CHECK_FAILED if bad else EXIT_OK


def fig2_curve(B_min=0.01, B_max=5.0, B_step=1e-3, m=2, n=5, p=2):
    count = int(math.floor((B_max - B_min) / B_step + 1e-9)) + 1
    Bs = B_min + B_step * np.arange(count)
    return Bs, partition.well1d_bound_H(Bs, m, n, p)


def cmd_fig2(cfg):
    B_min = 0.01 if cfg.B_min is None else cfg.B_min
    B_max = 5.0 if cfg.B_max is None else cfg.B_max
    B_step = 1e-3 if cfg.B_step is None else cfg.B_step
    _need(0 < B_min <= B_max and B_step > 0, "need 0 < B-min <= B-max and B-step > 0")
    m, n, p = cfg.m, cfg.n, cfg.p
    Bs, vals = fig2_curve(B_min, B_max, B_step, m, n, p)
    k = int(np.argmax(vals))
    meta = [("cut", f"m={m} n={n} p={p}"), ("argmax_B", fmt(Bs[k])), ("max_bound", fmt(vals[k])),
            ("analytic_B_max", fmt((n - 1) / (m + 1) ** 2))]
    emit(render(["B", "bound_H"], zip(Bs.tolist(), vals.tolist()), meta, cfg.format), cfg.out)
    return EXIT_OK


def cmd_partition(cfg):
    _need(cfg.system in SYSTEMS, "--system must be one of " + ", ".join(SYSTEMS))
    r = _evaluate(cfg.system, cfg.B, cfg.m, cfg.n, cfg.p)
    ref = _reference(cfg.system, cfg.B)
    rows = [(cfg.system, cfg.B, cfg.m, cfg.n, cfg.p, r.value, r.head, r.W_terms, ref, abs(r.value - ref), r.bound_A, r.bound_H)]
    meta = [("assumptions", "; ".join(r.assumptions) or "none")]
    header = ["system", "B", "m", "n", "p", "value", "head", "W_terms", "oracle", "abs_error", "bound_A", "bound_H"]
    emit(render(header, rows, meta, cfg.format), cfg.out)
    return EXIT_OK


def cmd_conjecture(cfg):
    n_max = cfg.n_max
    rep = partition.conjecture_report(n_max, cfg.grid_step)
    rows = [(n, rep.margins[n - 1], n not in rep.violations) for n in range(1, n_max + 1)]
    meta = [("grid_step", fmt(cfg.grid_step)), ("violations", len(rep.violations))]
    emit(render(["n", "min_relative_margin", "holds"], rows, meta, cfg.format), cfg.out)
    return EXIT_OK if rep.ok else EXIT_CHECK_FAILED


HANDLERS = {
    "tables": cmd_tables,
    "sum1d": cmd_sum1d,
    "sum2d": cmd_sum2d,
    "partition": cmd_partition,
    "sweep": cmd_sweep,
    "fig2": cmd_fig2,
    "conjecture": cmd_conjecture,
}


def _fail(parser, code, message):
    sys.stderr.write(f"error: {code}: {message}\n")
    sys.stderr.write(parser.format_usage())
    return EXIT_USAGE


def main(argv=None):
    parser = build_parser()
    try:
        cfg = parser.parse_args(argv)
        fig = cfg.command == "fig2"
        for key, plain, figure in (("m", 0, 2), ("n", 3, 5), ("p", 0, 2)):
            if getattr(cfg, key) is None:
                setattr(cfg, key, figure if fig else plain)
        return HANDLERS[cfg.command](cfg)
    except UsageError as exc:
        return _fail(parser, exc.code, str(exc))
    except MemfError as exc:
        return _fail(parser, exc.code, str(exc))
    except ValueError as exc:
        return _fail(parser, "E_INVALID_ARGUMENT", str(exc))
    except BrokenPipeError:
        # downstream reader closed early (e.g. piped into head)
        sys.stderr.close()
        return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
