"""Timing comparison of the compiled graph kernels against the
pure-Python fallback.

Both implementations are imported directly, so a single run times the
two of them on the same CSR arrays and confirms the outputs agree.

    python3 benchmarks/bench_kernels.py [--radius N] [--repeats K]
"""

import argparse
import time

import numpy as np

from coarsekit.cli.manifest import load_manifest
from coarsekit.graphs import Truncation
from coarsekit.kernels import _pure

try:
    from coarsekit.kernels import _ckern
except ImportError:
    _ckern = None


def csr_of(graph_name, radius, man):
    trunc = Truncation(man.graph(graph_name), radius)
    weights = np.ones(len(trunc.indices), dtype=np.float64)
    return trunc, weights


def time_call(fn, repeats, *args):
    best = float("inf")
    out = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def bench(graph_name, radius, repeats, man):
    trunc, weights = csr_of(graph_name, radius, man)
    sources = [0, trunc.n // 2, trunc.n - 1]
    rows = []
    for kernel, args_of in (
        ("bfs_levels", lambda s: (trunc.indptr, trunc.indices, s, trunc.n)),
        ("dijkstra", lambda s: (trunc.indptr, trunc.indices, weights, s,
                                trunc.n)),
    ):
        pure_total = 0.0
        fast_total = 0.0
        agree = True
        for s in sources:
            t_pure, out_pure = time_call(getattr(_pure, kernel), repeats,
                                         *args_of(s))
            pure_total += t_pure
            if _ckern is not None:
                t_fast, out_fast = time_call(getattr(_ckern, kernel),
                                             repeats, *args_of(s))
                fast_total += t_fast
                agree = agree and np.array_equal(np.asarray(out_pure),
                                                 np.asarray(out_fast))
        rows.append((graph_name, trunc.n, kernel, pure_total, fast_total,
                     agree))
    return rows


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--radius", type=int, default=64,
                        help="line/grid truncation radius (tree uses "
                        "radius//6)")
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()
    man = load_manifest()

    print("%-8s %8s %-12s %12s %12s %8s %s"
          % ("graph", "vertices", "kernel", "pure (s)", "compiled (s)",
             "speedup", "agree"))
    for graph_name, radius in (("line", args.radius * 4),
                               ("grid", args.radius),
                               ("tree3", max(4, args.radius // 6))):
        for row in bench(graph_name, radius, args.repeats, man):
            name, n, kernel, pure_t, fast_t, agree = row
            if _ckern is None:
                print("%-8s %8d %-12s %12.6f %12s %8s %s"
                      % (name, n, kernel, pure_t, "n/a", "n/a", agree))
            else:
                speedup = pure_t / fast_t if fast_t > 0 else float("inf")
                print("%-8s %8d %-12s %12.6f %12.6f %7.1fx %s"
                      % (name, n, kernel, pure_t, fast_t, speedup, agree))
    if _ckern is None:
        print("compiled extension not available; showing pure timings only")


if __name__ == "__main__":
    main()
