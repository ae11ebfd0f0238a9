"""Time the pure-Python and compiled kernels on the same workloads.

    python benchmarks/bench_kernels.py [--repeat 3]

Prints one row per workload with the best time for each backend and the ratio.
"""

import argparse
import random
import time
from fractions import Fraction
from itertools import combinations

import numpy as np

from eyefree import kernels
from eyefree.igraph import IGraph
from eyefree.pattern import eye


def random_igraph(rng, n):
    return IGraph.from_upper(n, [rng.choice((0, 1, 2, 3)) for _ in range(n * (n - 1) // 2)])


def workloads():
    rng = random.Random(0)
    H = eye(2, 3)
    pr, pb = H.compiled
    hosts = [random_igraph(rng, 12) for _ in range(200)]
    small = [random_igraph(rng, 7) for _ in range(400)]

    def embed(impl):
        for C in hosts:
            impl.find_embedding(C.red, C.blue, (1 << C.n) - 1, -1, pr, pb)

    def copies(impl):
        for C in small[:100]:
            impl.copy_subsets(C.red, C.blue, C.n, pr, pb)

    def canon(impl):
        for C in small:
            impl.canonical_code(C.n, C.codes)

    g = np.random.default_rng(0)
    n = 8
    rows = np.zeros((4000, n), dtype=np.uint64)
    for u, v in combinations(range(n), 2):
        e = (g.random(4000) < 0.5).astype(np.uint64)
        rows[:, u] |= e << np.uint64(v)
        rows[:, v] |= e << np.uint64(u)
    p22 = eye(2, 2).compiled
    lists = [[int(x) for x in r] for r in rows]

    def scan(impl):
        arg = lists if impl.BACKEND == "python" else rows
        impl.scan_ifree(arg, n, *p22)

    def bnb(impl):
        p = Fraction(1, 2)
        for prefix in ((3,), (1,), (2,)):
            impl.kex_bnb(6, *p22, p.numerator, p.denominator - p.numerator, p.denominator, 0, list(prefix))

    cin = [[rng.randint(0, 1) for _ in range(11)] for _ in range(11)]
    ccr = [[1 - cin[u][v] for v in range(11)] for u in range(11)]

    def part(impl):
        impl.partition_bnb(11, 3, cin, ccr, 200)

    return [("find_embedding n=12 x200", embed), ("copy_subsets n=7 x100", copies),
            ("canonical_code n=7 x400", canon), ("scan_ifree n=8 x4000", scan),
            ("kex_bnb n=6 p=1/2", bnb), ("partition_bnb n=11 k=3", part)]


def best_time(fn, impl, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(impl)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    impls = kernels.backends()
    names = list(impls)
    print(f"{'workload':28s}" + "".join(f"{nm:>12s}" for nm in names) + ("     speedup" if len(names) > 1 else ""))
    for label, fn in workloads():
        times = [best_time(fn, impls[nm], args.repeat) for nm in names]
        line = f"{label:28s}" + "".join(f"{t:11.4f}s" for t in times)
        if len(times) > 1:
            line += f"{times[0] / times[1]:11.1f}x"
        print(line)


if __name__ == "__main__":
    main()
