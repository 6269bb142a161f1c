"""Benchmark the compiled kernels against the pure-Python fallback.

Runs the same workloads once per backend and reports wall-clock times and
the speedup. Backend switching reuses the ``CKNNTDA_PURE_PYTHON``
environment hook: reloading :mod:`cknntda._kernels` rebinds the kernel
functions in place, so the high-level routines pick up the new backend
without reimporting the package.

Usage::

    python3 benchmarks/bench_kernels.py [--n-homology N] [--n-components N]
                                        [--repeats R] [--seed S]
"""

import argparse
import importlib
import os
import time

import cknntda as ck
import cknntda._kernels as kernels


def homology_workload(n, seed):
    """Persistence up to dimension 2 on a noisy figure eight.

    Exercises ``uf_merge_ranks`` (dimension-0 pairing), ``flag_triangles``
    (clique enumeration), and ``reduce_z2`` (boundary reduction).
    """
    cloud = ck.gen_figure_eight(seed=seed, n_large=2 * n // 3, n_small=n // 3)
    d = ck.pairwise_distances(cloud.points)
    rho = ck.knn_bandwidth(d, 10)
    filt = ck.cknn_filtration(d, rho)
    return lambda: ck.persistent_homology(filt, max_dim=2)


def components_workload(n, seed):
    """Full merge history of an edge ordering on a circle sample.

    Exercises ``uf_merge_ranks`` on a quadratic number of edges.
    """
    cloud = ck.gen_uniform_circle(n, seed=seed)
    d = ck.pairwise_distances(cloud.points)
    rho = ck.knn_bandwidth(d, 10)
    filt = ck.cknn_filtration(d, rho)
    return lambda: ck.component_transitions(filt)


def best_time(fn, repeats):
    """Smallest wall-clock time over ``repeats`` runs."""
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def set_backend(pure):
    if pure:
        os.environ["CKNNTDA_PURE_PYTHON"] = "1"
    else:
        os.environ.pop("CKNNTDA_PURE_PYTHON", None)
    importlib.reload(kernels)
    return kernels.BACKEND


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n-homology", type=int, default=90,
                        help="points in the persistence workload")
    parser.add_argument("--n-components", type=int, default=600,
                        help="points in the merge-history workload")
    parser.add_argument("--repeats", type=int, default=3,
                        help="runs per measurement (best is reported)")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)

    workloads = [
        ("persistent_homology", homology_workload(args.n_homology, args.seed),
         f"n={args.n_homology}, max_dim=2"),
        ("component_transitions", components_workload(args.n_components, args.seed),
         f"n={args.n_components}"),
    ]

    results = {}
    for pure in (False, True):
        backend = set_backend(pure)
        if not pure and backend != "compiled":
            print("compiled extension unavailable; timing the fallback only")
        for name, fn, _ in workloads:
            results[(backend, name)] = best_time(fn, args.repeats)
    set_backend(False)

    header = f"{'workload':<24} {'detail':<22} {'compiled':>10} {'pure':>10} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for name, _, detail in workloads:
        tc = results.get(("compiled", name))
        tp = results[("pure-python", name)]
        if tc is None:
            print(f"{name:<24} {detail:<22} {'n/a':>10} {tp:>9.3f}s {'n/a':>8}")
        else:
            print(f"{name:<24} {detail:<22} {tc:>9.3f}s {tp:>9.3f}s {tp / tc:>7.1f}x")


if __name__ == "__main__":
    main()
