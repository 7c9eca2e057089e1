"""Time the numba and numpy kernel backends on the same inputs.

    python3 benchmarks/bench_kernels.py [--repeat 5]

The first numba call per kernel includes JIT compilation (or a cache load)
and is reported separately as "warmup".
"""
import argparse
import time

import numpy as np

from levitone import _kernels
from levitone.harmony import MAJOR, MINOR, all_systems, chord, make_system
from levitone.levigraph import PRESERVING, _initial_domain, build_graph
from levitone.zmod import units


def triples(sys, q):
    return np.array([chord(sys, q, r).triple for r in range(sys.n)], dtype=np.int64)


def workloads(n):
    systems = all_systems(n)
    mults = np.array(units(n), dtype=np.int64)
    fam = [(triples(a, MAJOR), triples(a, MINOR), triples(b, MAJOR), triples(b, MINOR), mults, n)
           for a in systems[::7] for b in systems[::5]]
    graphs = [build_graph(s) for s in systems]
    ref = [(g.adjacency, np.zeros(2 * n, dtype=np.int64)) for g in graphs]
    g1, g2 = build_graph(make_system(n, 4 % n or 1, 3 % n or 1)), build_graph(make_system(n, 3 % n or 1, 4 % n or 1))
    arrs = _kernels.as_kernel_arrays(g1.adjacency, g2.adjacency, g1.distances, g2.distances)
    iso = [arrs + (_initial_domain(g1, g2, PRESERVING),)]
    return {"family_match": fam, "refine": ref, "iso_search": iso}


def timed(fn, calls, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        for args in calls:
            fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--n", type=int, nargs="+", default=[10, 12])
    args = ap.parse_args()
    if not _kernels.HAVE_NUMBA:
        print("numba not importable; only the numpy backend exists")
    print(f"{'kernel':<14}{'n':>4}{'calls':>7}{'numpy ms':>11}{'numba ms':>11}{'warmup ms':>11}{'speedup':>9}")
    for n in args.n:
        for name, calls in workloads(n).items():
            np_fn = getattr(_kernels, f"{name}_numpy")
            nb_fn = getattr(_kernels, f"{name}_numba")
            t_np = timed(np_fn, calls, args.repeat)
            if nb_fn is None:
                print(f"{name:<14}{n:>4}{len(calls):>7}{t_np * 1e3:>11.2f}{'-':>11}{'-':>11}{'-':>9}")
                continue
            t0 = time.perf_counter()
            nb_fn(*calls[0])
            warm = time.perf_counter() - t0
            t_nb = timed(nb_fn, calls, args.repeat)
            for c in calls[:3]:
                assert np.array_equal(np_fn(*c), nb_fn(*c)), name
            print(f"{name:<14}{n:>4}{len(calls):>7}{t_np * 1e3:>11.2f}{t_nb * 1e3:>11.2f}{warm * 1e3:>11.1f}{t_np / t_nb:>8.1f}x")


if __name__ == "__main__":
    main()
