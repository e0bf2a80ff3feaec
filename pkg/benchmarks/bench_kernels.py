"""Time the compiled kernels against the pure-Python ones.

Run: python benchmarks/bench_kernels.py [--repeats N]
"""

from __future__ import annotations

import argparse
import time
from array import array

from tri2m import kernels
from tri2m.gadget import build_gadget
from tri2m.graph import build_graph
from tri2m.oracle import generate_instance, greedy_initial_matching, triangle_csr, upper_bound


def _best_of(fn, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_find_path(impl, n: int, seed: int):
    g = generate_instance(n, min(1.0, 6.0 / (n - 1)), seed, "uniform")
    m = greedy_initial_matching(g).edges
    gg = build_gadget(g, m)
    roots = [gg.exposed_copies(v)[0] for v in range(g.n) if gg.exposed_copies(v)]

    def run():
        for r in roots:
            impl.find_path(gg.adj_start, gg.adj_edge, gg.eu, gg.ev, gg.mate, gg.present, r)

    return run, f"find_path n={n} roots={len(roots)}"


def bench_bnb(impl, k: int, seed: int):
    # k disjoint triangles: the degree bound is loose by k, so pruning is weak
    g = build_graph(3 * k, [(3 * i + a, 3 * i + b) for i in range(k) for a, b in ((0, 1), (0, 2), (1, 2))])
    eu = array("l", (u for u, _ in g.edges))
    ev = array("l", (v for _, v in g.edges))
    start, pairs = triangle_csr(g)
    ub = upper_bound(g)

    def run():
        impl.bnb_optimum(g.n, eu, ev, start, pairs, 0, ub + 1, 10**9)

    return run, f"bnb_optimum triangles={k}"


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeats", type=int, default=3)
    args = ap.parse_args()
    if kernels.compiled_kernels is None:
        print("compiled kernels not built; only the Python timings are shown")
    impls = [("python", kernels.python_kernels)]
    if kernels.compiled_kernels is not None:
        impls.append(("cython", kernels.compiled_kernels))
    cases = [(bench_find_path, 200, 1), (bench_find_path, 800, 2), (bench_bnb, 7, 0), (bench_bnb, 9, 0)]
    print(f"{'case':<32} " + " ".join(f"{name:>10}" for name, _ in impls) + "   speedup")
    for make, n, seed in cases:
        times = []
        label = ""
        for _, impl in impls:
            run, label = make(impl, n, seed)
            times.append(_best_of(run, args.repeats))
        speed = f"{times[0] / times[1]:8.1f}x" if len(times) == 2 and times[1] > 0 else ""
        print(f"{label:<32} " + " ".join(f"{t:10.4f}" for t in times) + f"   {speed}")


if __name__ == "__main__":
    main()
