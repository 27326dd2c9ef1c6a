"""Time the numba kernels against the numpy fallback.

    python benchmarks/bench_kernels.py --papers 20000 --authors 25000 --laureates 20

Reports, per backend, the best of ``--repeat`` runs for the BFS sweep over
all laureates and for the weight accumulation in each distance mode, and
checks that both backends produce identical arrays.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from pwindex import _kernels
from pwindex.graph import build_graph
from pwindex.synthetic import synthetic_corpus


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        times.append(time.perf_counter() - t0)
    return min(times), result


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--papers", type=int, default=20_000)
    ap.add_argument("--authors", type=int, default=25_000)
    ap.add_argument("--laureates", type=int, default=20)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    t0 = time.perf_counter()
    records, laureates = synthetic_corpus(args.papers, args.authors, args.laureates, args.seed)
    graph = build_graph(records)
    print(f"corpus: {len(records)} papers, {graph.n_nodes} authors, {graph.n_edges} edges, "
          f"{len(laureates)} laureates (built in {time.perf_counter() - t0:.2f} s)")
    sources = [graph.index[w] for w in laureates]

    impls = {
        "numba": (lambda s: _kernels.bfs_numba(graph.indptr, graph.indices, np.int64(s)),
                  lambda d, s, r, out: _kernels.accumulate_numba(
                      graph.paper_ptr, graph.paper_nodes, d, np.int64(s), r, np.int64(-1), out)),
        "numpy": (lambda s: _kernels.bfs_numpy(graph.indptr, graph.indices, s),
                  lambda d, s, r, out: _kernels.accumulate_numpy(
                      graph.paper_ptr, graph.paper_nodes, d, s, r, -1, out)),
    }

    # First call compiles (or loads the cache); keep it out of the timings.
    t0 = time.perf_counter()
    d = impls["numba"][0](sources[0])
    impls["numba"][1](d, sources[0], True, np.zeros(graph.n_nodes))
    impls["numba"][1](d, sources[0], False, np.zeros(graph.n_nodes))
    print(f"numba warm-up (compile or cache load): {time.perf_counter() - t0:.2f} s\n")

    results = {}
    print(f"{'backend':8s} {'bfs sweep':>12s} {'realized':>12s} {'global':>12s}")
    for name, (bfs, acc) in impls.items():
        t_bfs, dists = best_of(lambda: [bfs(s) for s in sources], args.repeat)
        row = [t_bfs]
        sums = {}
        for realized in (True, False):
            def run():
                out = np.zeros(graph.n_nodes)
                for dist, s in zip(dists, sources):
                    acc(dist, s, realized, out)
                return out
            t, sums[realized] = best_of(run, args.repeat)
            row.append(t)
        results[name] = (dists, sums)
        print(f"{name:8s} " + " ".join(f"{1e3 * t:10.2f}ms" for t in row))

    (d1, s1), (d2, s2) = results["numba"], results["numpy"]
    same = all(np.array_equal(a, b) for a, b in zip(d1, d2)) and all(
        np.array_equal(s1[k], s2[k]) for k in s1)
    print(f"\nbackends agree exactly: {same}")


if __name__ == "__main__":
    main()
