"""Compare the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 3]
"""

import argparse
import time

import numpy as np

from partmax import _backend
from partmax.influence import RealizationSet, assign_degree_weights, random_graph
from partmax.quantify import value_table
from partmax.synthetic import random_instance


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases():
    g = assign_degree_weights(random_graph(2000, 3, rng=0))
    st = RealizationSet.sample(g.num_edges, 100, 0).states(g)
    boosted = np.zeros(g.n, np.uint8)
    boosted[:50] = 1
    cands = np.arange(200, dtype=np.int64)
    yield "reach_gains (2000 nodes, 100 samples, 200 cands)", \
        lambda k: k.reach_gains(g.out_ptr, g.dst, st, g.seeds, boosted, cands)

    m, o = random_instance("mixed", 10, 0)
    table = value_table(o, 10)
    args = (table, np.asarray(m.group_of, np.int64), np.asarray(m.budgets, np.int64), 1e-12)
    yield "gamma_alpha_scan (n=10)", lambda k: k.gamma_alpha_scan(*args)

    A = np.random.default_rng(0).normal(size=(60, 60))
    A = A + A.T
    yield "jacobi_eigenvalues (60x60)", lambda k: k.jacobi_eigenvalues(A.copy(), 1e-10, 100)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    names = ["python"] + (["cython"] if _backend.BACKEND == "cython" else [])
    print(f"{'kernel':52s}" + "".join(f"{n:>12s}" for n in names) + "   speedup")
    for label, fn in cases():
        ts = [best_of(lambda: fn(_backend.get_kernels(n)), args.repeat) for n in names]
        speed = f"{ts[0] / ts[1]:9.1f}x" if len(ts) == 2 else "      n/a"
        print(f"{label:52s}" + "".join(f"{t:11.4f}s" for t in ts) + "  " + speed)


if __name__ == "__main__":
    main()
