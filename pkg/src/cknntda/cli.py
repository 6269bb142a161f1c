"""Command-line entry point: dataset generation, persistence, clustering,
spectra, and bandwidth sweeps as reproducible file-producing runs.

Exit codes: 0 success, 2 validation failure (also used by argparse), 3
resource cap exceeded. Every run writes `<out>.meta.json` with the resolved
arguments and library version.
"""

import argparse
import json
import sys

import numpy as np

from . import __version__, clustering, datagen, geometry, graphs, homology, spectral
from .errors import ResourceLimitError, ValidationError

POINT_DATASETS = (
    "figure-eight",
    "circle",
    "cut-gaussian",
    "cut-gaussian-1d",
    "three-boxes",
    "spirals-2d",
    "spirals-3d",
)
PATTERN_DATASETS = tuple(f"pattern-{k}" for k in datagen.PATTERN_KINDS)
FILTRATION_METHODS = ("cknn", "eps", "beta")
GRAPH_METHODS = ("knn", "knn-and")


def _write_meta(out, args):
    payload = {
        "version": __version__,
        "subcommand": args.subcommand,
        "arguments": {
            k: v for k, v in vars(args).items() if k not in ("func", "subcommand")
        },
    }
    with open(f"{out}.meta.json", "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _generate(args):
    name, seed, n = args.name, args.seed, args.n
    if name == "figure-eight":
        return datagen.gen_figure_eight(seed=seed)
    if name == "circle":
        return datagen.gen_uniform_circle(n or 100, seed=seed)
    if name == "cut-gaussian":
        return datagen.gen_cut_gaussian(
            m=args.m or 2, n_target=n or 200, seed=seed, variant=args.variant
        )
    if name == "cut-gaussian-1d":
        return datagen.gen_cut_gaussian_1d_embedded(n or 200, seed=seed)
    if name == "three-boxes":
        return datagen.gen_three_boxes(seed=seed)
    if name == "spirals-2d":
        return datagen.gen_spirals(dim=2, n_total=n or 300, seed=seed)
    if name == "spirals-3d":
        return datagen.gen_spirals(dim=3, n_total=n or 300, seed=seed)
    raise ValidationError(f"unknown dataset {name!r}")


def cmd_datagen(args):
    if args.name in PATTERN_DATASETS:
        kind = args.name[len("pattern-") :]
        img = datagen.gen_pattern_image(kind, gradient=args.gradient)
        datagen.write_pgm(args.out, img)
        _write_meta(args.out, args)
        print(f"wrote {args.out}: {img.shape[0]}x{img.shape[1]} {kind} image")
        return 0
    cloud = _generate(args)
    geometry.write_points_csv(args.out, cloud.points)
    if cloud.labels is not None:
        geometry.write_labels_csv(f"{args.out}.labels.csv", cloud.labels)
    _write_meta(args.out, args)
    print(
        f"wrote {args.out}: N={cloud.n_points} dim={cloud.dim_ambient} seed={args.seed}"
    )
    return 0


def _load_points(path):
    pts = geometry.read_points_csv(path)
    return pts, geometry.pairwise_distances(pts)


def _build_filtration(args, d):
    if args.method == "cknn":
        rho = geometry.knn_bandwidth(d, args.k)
        return graphs.cknn_filtration(d, rho)
    if args.method == "eps":
        return graphs.fixed_eps_filtration(d)
    if args.method == "beta":
        if args.beta is None:
            raise ValidationError("--method beta requires --beta")
        q = spectral.knn_density(d, args.k, args.m)
        return graphs.multiscale_filtration(d, q**args.beta)
    raise ValidationError(f"method {args.method!r} does not define a filtration")


def cmd_persist(args):
    _, d = _load_points(args.points)
    filt = _build_filtration(args, d)
    bars = homology.persistent_homology(filt, max_dim=args.max_dim)
    homology.write_barcode_csv(args.out, bars)
    stable = homology.stable_interval(bars, filt)
    with open(f"{args.out}.stable.json", "w") as fh:
        json.dump(stable.as_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")
    _write_meta(args.out, args)
    betti = ",".join(str(b) for b in stable.betti)
    print(
        f"N={filt.n_vertices} edges={filt.n_edges} stable betti=({betti}) "
        f"fraction={stable.fraction:.4f}"
    )
    return 0


def cmd_cluster(args):
    _, d = _load_points(args.points)
    if args.method in GRAPH_METHODS:
        if args.clusters is not None:
            raise ValidationError(
                f"--clusters applies to filtration methods {FILTRATION_METHODS}; "
                f"method {args.method!r} yields one fixed graph"
            )
        mode = "and" if args.method == "knn-and" else "or"
        graph = graphs.knn_graph(d, args.k, mode=mode)
        labeling = clustering.connected_components(graph)
        geometry.write_labels_csv(args.out, labeling.labels)
        _write_meta(args.out, args)
        print(f"edges={graph.n_edges} components={labeling.n_components}")
        return 0
    if args.clusters is None:
        raise ValidationError("--clusters is required for filtration methods")
    filt = _build_filtration(args, d)
    count, labeling = clustering.binary_search_clusters(filt, args.clusters)
    geometry.write_labels_csv(args.out, labeling.labels)
    _write_meta(args.out, args)
    print(f"edges={count} components={labeling.n_components}")
    return 0


def _resolve_delta(raw, n, m):
    if raw is None:
        raise ValidationError("--delta is required (a number, or auto-pointwise/auto-spectral)")
    try:
        return float(raw)
    except ValueError:
        pass
    if raw in ("auto-pointwise", "auto-spectral"):
        return spectral.theory_delta(n, m, raw.split("-", 1)[1])
    raise ValidationError(
        f"--delta must be a number or auto-pointwise/auto-spectral, got {raw!r}"
    )


def cmd_spectrum(args):
    _, d = _load_points(args.points)
    n = d.shape[0]
    delta = _resolve_delta(args.delta, n, args.m)
    if args.mu == "one":
        mu = None
    elif args.mu == "inv-density":
        mu = 1.0 / spectral.knn_density(d, args.k, args.m)
    else:
        if args.mu_csv is None:
            raise ValidationError("--mu custom-csv requires --mu-csv PATH")
        mu = np.loadtxt(args.mu_csv, dtype=np.float64, ndmin=1)
    system = spectral.laplacian_system(
        d, np.ones(n), delta, m=args.m, shape=args.kernel, mu=mu
    )
    vals = spectral.spectrum(system, args.num)
    with open(args.out, "w") as fh:
        fh.write("index,eigenvalue\n")
        for i, v in enumerate(vals):
            fh.write(f"{i},{v:.17g}\n")
    _write_meta(args.out, args)
    shown = " ".join(f"{v:.6g}" for v in vals[: min(5, len(vals))])
    print(f"N={n} delta={delta:.6g} eigenvalues: {shown}")
    return 0


def cmd_sweep(args):
    modes = ["pointwise", "spectral"] if args.mode == "both" else [args.mode]
    n_values = [int(tok) for tok in args.n_list.split(",") if tok]
    if not n_values:
        raise ValidationError("--n-list must name at least one size")
    if args.seeds < 1:
        raise ValidationError("--seeds must be positive")
    seeds = range(args.seeds)
    if args.jobs > 1:
        import multiprocessing

        pool = multiprocessing.Pool(args.jobs)
        map_fn = pool.map
    else:
        pool, map_fn = None, map
    try:
        results = [
            spectral.bandwidth_power_law_experiment(
                n_values=n_values,
                mode=mode,
                seeds=seeds,
                shape=args.kernel,
                map_fn=map_fn,
            )
            for mode in modes
        ]
    finally:
        if pool is not None:
            pool.close()
            pool.join()
    records = [row for res in results for row in res.records]
    spectral.write_sweep_csv(args.out, records)
    slopes = {
        res.mode: {
            "slope": res.slope,
            "theory": res.theory,
            "n": res.n_values.tolist(),
            "best_delta": res.best_deltas.tolist(),
            "best_rmse": res.best_rmses.tolist(),
            "interior": res.interior.tolist(),
        }
        for res in results
    }
    with open(f"{args.out}.slopes.json", "w") as fh:
        json.dump(slopes, fh, indent=2, sort_keys=True)
        fh.write("\n")
    _write_meta(args.out, args)
    for res in results:
        print(f"{res.mode}: slope={res.slope:.4f} theory={res.theory:.4f}")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="cknntda",
        description="Continuous k-nearest-neighbor graphs, clustering, "
        "persistent homology, and graph-Laplacian spectra.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("datagen", help="generate a dataset (points CSV or PGM image)")
    p.add_argument("name", choices=POINT_DATASETS + PATTERN_DATASETS)
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", type=int, default=None, help="point count where applicable")
    p.add_argument("--m", type=int, default=None, help="ambient dimension (cut-gaussian)")
    p.add_argument("--variant", choices=("count", "sample"), default="count")
    p.add_argument("--gradient", action="store_true", help="brightness ramp (patterns)")
    p.set_defaults(func=cmd_datagen)

    p = sub.add_parser("persist", help="barcode + stable interval from points")
    p.add_argument("--points", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--method", choices=FILTRATION_METHODS, default="cknn")
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--beta", type=float, default=None)
    p.add_argument("--m", type=int, default=2, help="intrinsic dim for density estimates")
    p.add_argument("--max-dim", type=int, default=2)
    p.set_defaults(func=cmd_persist)

    p = sub.add_parser("cluster", help="labels via edge-count search or a kNN graph")
    p.add_argument("--points", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--method", choices=FILTRATION_METHODS + GRAPH_METHODS, default="cknn")
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--beta", type=float, default=None)
    p.add_argument("--m", type=int, default=2, help="intrinsic dim for density estimates")
    p.add_argument("--clusters", type=int, default=None)
    p.set_defaults(func=cmd_cluster)

    p = sub.add_parser("spectrum", help="smallest Laplacian eigenvalues")
    p.add_argument("--points", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--delta", default=None, help="number, auto-pointwise, or auto-spectral")
    p.add_argument("--kernel", choices=spectral.KERNEL_SHAPES, default="indicator")
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--mu", choices=("one", "inv-density", "custom-csv"), default="one")
    p.add_argument("--mu-csv", default=None)
    p.add_argument("--k", type=int, default=10, help="neighbors for density estimates")
    p.add_argument("--num", type=int, default=5, help="number of eigenvalues")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("sweep", help="optimal-bandwidth power law on the circle")
    p.add_argument("--out", required=True)
    p.add_argument("--mode", choices=("pointwise", "spectral", "both"), default="both")
    p.add_argument("--n-list", default="250,500,1000,2000,4000")
    p.add_argument("--seeds", type=int, default=5, help="seeds 0..S-1 per size")
    p.add_argument("--kernel", choices=spectral.KERNEL_SHAPES, default="indicator")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_sweep)

    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ResourceLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
