#!/usr/bin/env python3
"""Benchmark the compiled cubic-scan kernels against the pure-Python
fallback.

Both backends run the same two scans that dominate large-group work: the
associativity check done at every Cayley-table build, and the exhaustive
|G|^3 star-condition check of the realization pipeline.  Usage:

    python bench/bench_kernels.py [max_order]

The pure backend is skipped above 128 unless you pass --pure-all (the
512-case takes minutes there; that gap is the reason the extension
exists).
"""

import argparse
import sys
import time

from fuchs2 import kernels
from fuchs2.groups import build_group
from fuchs2.star import pc_sequence, star_table


def timed(fn, *args, **kw):
    t0 = time.perf_counter()
    out = fn(*args, **kw)
    return out, time.perf_counter() - t0


def bench_group(spec, pure_all):
    G = build_group(spec)
    star = star_table(G, pc_sequence(G))
    rows = []
    backends = ["compiled", "pure-python"] if kernels._ckernels else \
        ["pure-python"]
    for backend in backends:
        if backend == "pure-python" and G.n > 128 and not pure_all:
            rows.append((backend, None, None))
            continue
        _, t_assoc = timed(kernels.first_assoc_violation, G.mul,
                           backend=backend)
        _, t_cond = timed(kernels.first_condition_violation, G.mul,
                          star.table, backend=backend)
        rows.append((backend, t_assoc, t_cond))
    print(f"\n{spec} (order {G.n}, {G.n ** 3} triples per scan)")
    for backend, t_assoc, t_cond in rows:
        if t_assoc is None:
            print(f"  {backend:12s}  skipped (pass --pure-all to run)")
        else:
            print(f"  {backend:12s}  associativity {t_assoc * 1e3:9.1f} ms"
                  f"   star-conditions {t_cond * 1e3:9.1f} ms")
    if len(rows) == 2 and rows[1][1] is not None:
        print(f"  speedup: associativity x{rows[1][1] / rows[0][1]:.0f},"
              f" conditions x{rows[1][2] / rows[0][2]:.0f}")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("max_order", nargs="?", type=int, default=256)
    ap.add_argument("--pure-all", action="store_true")
    args = ap.parse_args()
    print(f"active backend: {kernels.BACKEND}")
    if not kernels._ckernels:
        print("compiled kernels unavailable; timing the fallback only",
              file=sys.stderr)
    for spec in ["C4xC4xC4", "D8xC4xC4", "Q8xQ8xC4", "C4xC4xC4xC4xC2"]:
        G_order = 1
        for atom in spec.split("x"):
            G_order *= int(atom[1:]) if atom[0] in "CDQ" else 1
        if G_order > args.max_order:
            continue
        bench_group(spec, args.pure_all)


if __name__ == "__main__":
    main()
