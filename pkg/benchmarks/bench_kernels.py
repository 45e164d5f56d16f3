"""Compare the compiled and numpy oracle kernels.

Times each kernel on random vertex sets, then one full exact count with the
session wired to each backend in turn.

    python benchmarks/bench_kernels.py --n 1024 --p 0.05
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from edgeoracle import kernels
from edgeoracle.exact import bis_exact_all, edge_count, is_exact_within
from edgeoracle.generators import erdos_renyi
from edgeoracle.graph import VertexSet
from edgeoracle.oracles import OracleSession

NAMES = ("cross_empty", "within_empty", "count_between", "count_within")


def kernel_args(adj, rng, n, size):
    perm = rng.permutation(n)
    s = np.sort(perm[:size]).astype(np.int64)
    v = np.sort(perm[size : 2 * size]).astype(np.int64)
    return {"cross_empty": (adj, s, v), "within_empty": (adj, s), "count_between": (adj, s, v), "count_within": (adj, s)}


def bench_kernels(graph, sizes, repeat):
    rng = np.random.default_rng(0)
    rows = []
    for size in sizes:
        size = min(size, graph.n // 2)
        args = kernel_args(graph.adj_words, rng, graph.n, size)
        for name in NAMES:
            times = {}
            for backend, mod in kernels.backends().items():
                fn = getattr(mod, name)
                call = args[name]
                number = max(1, repeat // max(1, size // 16))
                times[backend] = min(timeit.repeat(lambda: fn(*call), number=number, repeat=3)) / number
            rows.append((size, name, times))
    return rows


def bench_end_to_end(graph):
    out = {}
    saved = {name: getattr(kernels, name) for name in NAMES}
    try:
        for backend, mod in kernels.backends().items():
            for name in NAMES:
                setattr(kernels, name, getattr(mod, name))
            for label, run in (
                ("exact-bis", lambda s: bis_exact_all(s)),
                ("exact-is", lambda s: is_exact_within(s, VertexSet.full(graph.n))),
            ):
                session = OracleSession(graph)
                t = timeit.default_timer()
                count = edge_count(run(session))
                out[(label, backend)] = (timeit.default_timer() - t, count, session.ledger.total)
    finally:
        for name, fn in saved.items():
            setattr(kernels, name, fn)
    return out


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=1024)
    ap.add_argument("--p", type=float, default=0.05)
    ap.add_argument("--sizes", default="4,64,256", help="set sizes (each at most n/2)")
    ap.add_argument("--repeat", type=int, default=2000)
    args = ap.parse_args()

    graph = erdos_renyi(args.n, args.p, np.random.default_rng(1))
    print(f"graph: n={graph.n} m={graph.m}; active backend: {kernels.BACKEND}")
    backends = list(kernels.backends())
    print(f"{'size':>6} {'kernel':<14}" + "".join(f"{b + ' us':>14}" for b in backends) + (f"{'speedup':>10}" if len(backends) > 1 else ""))
    for size, name, times in bench_kernels(graph, [int(x) for x in args.sizes.split(",")], args.repeat):
        line = f"{size:>6} {name:<14}" + "".join(f"{times[b] * 1e6:>14.2f}" for b in backends)
        if "cython" in times:
            line += f"{times['python'] / times['cython']:>10.1f}x"
        print(line)

    print()
    for (label, backend), (secs, count, queries) in bench_end_to_end(graph).items():
        print(f"{label:<10} {backend:<8} {secs:8.3f} s  edges={count} queries={queries}")


if __name__ == "__main__":
    main()
